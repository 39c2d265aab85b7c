"""Loss terms that are contracts of their own, independent of the loop."""

import torch

__all__ = ["decorrelation_penalty"]


def _as_matrix(values, what: str) -> torch.Tensor:
    tensor = torch.as_tensor(values, dtype=torch.float32)
    if tensor.ndim == 1:
        tensor = tensor.unsqueeze(1)
    if tensor.ndim != 2:
        raise ValueError(f"{what} must be a batch vector or matrix, got shape {tuple(tensor.shape)}")
    return tensor


def decorrelation_penalty(codes, known_dims) -> torch.Tensor:
    """Mean squared Pearson correlation across all (code, known-dim) pairs.

    Statistically independent batches score near zero, a code that tracks
    a known dimension scores near one for that pair. Columns that are
    constant up to rounding cannot carry correlation and contribute zero
    by convention, which keeps the term finite on degenerate batches.
    Differentiable, so it can sit in a training objective.
    """
    codes = _as_matrix(codes, "codes")
    known = _as_matrix(known_dims, "known_dims")
    if codes.shape[0] != known.shape[0]:
        raise ValueError(
            f"batches must align: {codes.shape[0]} code rows vs {known.shape[0]} known rows"
        )
    if codes.shape[0] < 2:
        raise ValueError("correlation needs at least two rows")
    cc = codes - codes.mean(dim=0)
    kk = known - known.mean(dim=0)
    c_scale = cc.pow(2).sum(dim=0).sqrt()
    k_scale = kk.pow(2).sum(dim=0).sqrt()
    cn = cc / c_scale.clamp_min(1e-12)
    kn = kk / k_scale.clamp_min(1e-12)
    corr = cn.T @ kn
    # spread below 1e-4 of the column magnitude is centering noise, not
    # signal; such columns count as constant
    c_floor = 1e-4 * codes.abs().amax(dim=0)
    k_floor = 1e-4 * known.abs().amax(dim=0)
    valid = (c_scale > c_floor).unsqueeze(1) & (k_scale > k_floor).unsqueeze(0)
    corr = torch.where(valid, corr, torch.zeros_like(corr))
    return corr.pow(2).mean()
