"""Adversarial training with a code-reconstruction head.

The generator maps noise plus latent codes to images; the discriminator
plays the usual real/fake game while its recognition head reconstructs
the codes from generated images. Weighting that reconstruction term keeps
the codes informative about the images. An optional decorrelation term
pushes the codes reconstructed from real images away from supplied
already-known dimensions.
"""

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import torch
from torch import nn

from .losses import decorrelation_penalty
from .models import Discriminator, Generator
from .shapes import ShapeSample

__all__ = [
    "TrainerConfig",
    "TrainingCurves",
    "TrainResult",
    "TrainingDiverged",
    "train",
    "load_checkpoint",
    "sample_codes",
]

DISTRIBUTIONS = ("uniform", "gaussian")


@dataclass(frozen=True)
class TrainerConfig:
    n_latent: int = 4
    n_categorical: int = 0
    latent_distribution: str = "uniform"
    noise_dim: int = 8
    lambda_mi: float = 2.0
    lambda_decor: float = 0.0
    epochs: int = 30
    batch_size: int = 64
    seed: int = 0
    lr: float = 2e-4

    def __post_init__(self):
        if self.n_latent < 1:
            raise ValueError("n_latent must be at least 1")
        if self.n_categorical < 0:
            raise ValueError("n_categorical must be nonnegative")
        if self.latent_distribution not in DISTRIBUTIONS:
            raise ValueError(f"latent_distribution must be one of {DISTRIBUTIONS}")
        if self.noise_dim < 1:
            raise ValueError("noise_dim must be at least 1")
        if self.lambda_mi < 0 or self.lambda_decor < 0:
            raise ValueError("loss weights must be nonnegative")
        if self.epochs < 1 or self.batch_size < 2:
            raise ValueError("epochs must be >= 1 and batch_size >= 2")
        if self.lr <= 0:
            raise ValueError("lr must be positive")


@dataclass
class TrainingCurves:
    recognition: List[float] = field(default_factory=list)
    generator: List[float] = field(default_factory=list)
    discriminator: List[float] = field(default_factory=list)
    decorrelation: List[float] = field(default_factory=list)


@dataclass
class TrainResult:
    generator: Generator
    discriminator: Discriminator
    curves: TrainingCurves
    config: TrainerConfig
    side: int
    checkpoint_path: Optional[Path]


class TrainingDiverged(RuntimeError):
    """A loss went non-finite; the last state was checkpointed."""

    def __init__(self, message: str, checkpoint_path: Optional[Path]):
        super().__init__(message)
        self.checkpoint_path = checkpoint_path


def sample_codes(n: int, config: TrainerConfig, generator: torch.Generator) -> torch.Tensor:
    if config.latent_distribution == "uniform":
        return torch.rand(n, config.n_latent, generator=generator) * 2.0 - 1.0
    return torch.randn(n, config.n_latent, generator=generator)


def _code_input(n: int, config: TrainerConfig, generator: torch.Generator):
    codes = sample_codes(n, config, generator)
    if config.n_categorical == 0:
        return codes, codes, None
    labels = torch.randint(config.n_categorical, (n,), generator=generator)
    onehot = torch.zeros(n, config.n_categorical)
    onehot[torch.arange(n), labels] = 1.0
    return torch.cat([codes, onehot], dim=1), codes, labels


def _save_checkpoint(path: Path, gen, disc, config, curves, side, epoch) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(
        {
            "generator": gen.state_dict(),
            "discriminator": disc.state_dict(),
            "config": asdict(config),
            "curves": asdict(curves),
            "side": side,
            "epoch": epoch,
        },
        path,
    )
    return path


def load_checkpoint(path):
    """Rebuild the models a checkpoint was saved from."""
    payload = torch.load(path, map_location="cpu", weights_only=True)
    config = TrainerConfig(**payload["config"])
    side = payload["side"]
    gen = Generator(config.noise_dim, config.n_latent + config.n_categorical, side)
    disc = Discriminator(config.n_latent, config.n_categorical, side)
    gen.load_state_dict(payload["generator"])
    disc.load_state_dict(payload["discriminator"])
    gen.eval()
    disc.eval()
    curves = TrainingCurves(**payload["curves"])
    return gen, disc, config, curves


def train(
    config: TrainerConfig,
    dataset: Sequence[ShapeSample],
    out_dir=None,
    known_dims=None,
) -> TrainResult:
    """Run the adversarial game over the dataset, one optimizer step per
    batch for each side, recording per-epoch loss means and checkpointing
    after every epoch. Raises TrainingDiverged (after a final checkpoint)
    the moment any loss stops being finite.
    """
    if len(dataset) < config.batch_size:
        raise ValueError(
            f"dataset holds {len(dataset)} samples, fewer than one batch of {config.batch_size}"
        )
    if config.lambda_decor > 0 and known_dims is None:
        raise ValueError("lambda_decor > 0 needs known_dims aligned with the dataset")
    side = dataset[0].image.shape[0]
    images = torch.from_numpy(np.stack([s.image for s in dataset])).unsqueeze(1)
    known = None
    if known_dims is not None:
        known = torch.as_tensor(np.asarray(known_dims), dtype=torch.float32)
        if known.shape[0] != len(dataset):
            raise ValueError("known_dims must have one row per dataset sample")

    torch.manual_seed(config.seed)
    rng = torch.Generator().manual_seed(config.seed)
    gen = Generator(config.noise_dim, config.n_latent + config.n_categorical, side)
    disc = Discriminator(config.n_latent, config.n_categorical, side)
    opt_d = torch.optim.Adam(
        list(disc.trunk.parameters()) + list(disc.adv_head.parameters()),
        lr=config.lr,
        betas=(0.5, 0.999),
    )
    opt_g = torch.optim.Adam(gen.parameters(), lr=config.lr, betas=(0.5, 0.999))
    # the reconstruction gradient shapes the shared trunk as well, so the
    # features the codes are read from stay informative about the codes
    opt_info = torch.optim.Adam(
        list(gen.parameters()) + list(disc.trunk.parameters()) + list(disc.q_head.parameters()),
        lr=config.lr,
        betas=(0.5, 0.999),
    )
    bce = nn.BCEWithLogitsLoss()
    mse = nn.MSELoss()
    ce = nn.CrossEntropyLoss()
    curves = TrainingCurves()
    ckpt = Path(out_dir) / "checkpoint.pt" if out_dir is not None else None

    def checkpoint(epoch: int) -> Optional[Path]:
        if ckpt is None:
            return None
        return _save_checkpoint(ckpt, gen, disc, config, curves, side, epoch)

    for epoch in range(config.epochs):
        order = torch.randperm(len(dataset), generator=rng)
        sums = {"recognition": 0.0, "generator": 0.0, "discriminator": 0.0, "decorrelation": 0.0}
        batches = 0
        for start in range(0, len(dataset) - config.batch_size + 1, config.batch_size):
            idx = order[start : start + config.batch_size]
            real = images[idx]
            n = real.shape[0]

            code_in, codes, labels = _code_input(n, config, rng)
            noise = torch.randn(n, config.noise_dim, generator=rng)
            fake = gen(noise, code_in)

            real_logit, _ = disc(real)
            fake_logit, _ = disc(fake.detach())
            d_loss = bce(real_logit, torch.ones(n)) + bce(fake_logit, torch.zeros(n))
            opt_d.zero_grad()
            d_loss.backward()
            opt_d.step()

            fake_logit, _ = disc(fake)
            adv_loss = bce(fake_logit, torch.ones(n))
            opt_g.zero_grad()
            adv_loss.backward()
            opt_g.step()

            # separate reconstruction step on a fresh draw: its gradient
            # must not mix with the fooling direction inside the trunk
            code_in2, codes2, labels2 = _code_input(n, config, rng)
            noise2 = torch.randn(n, config.noise_dim, generator=rng)
            with torch.set_grad_enabled(config.lambda_mi > 0 or config.lambda_decor > 0):
                _, fake_q = disc(gen(noise2, code_in2))
                recognition = mse(fake_q[:, : config.n_latent], codes2)
                if labels2 is not None:
                    recognition = recognition + ce(fake_q[:, config.n_latent :], labels2)
                decor = torch.zeros(())
                if config.lambda_decor > 0:
                    decor = decorrelation_penalty(disc.codes(real), known[idx])
                info_loss = config.lambda_mi * recognition + config.lambda_decor * decor
            if info_loss.requires_grad:
                opt_info.zero_grad()
                info_loss.backward()
                opt_info.step()

            values = {
                "recognition": float(recognition.detach()),
                "generator": float(adv_loss.detach()),
                "discriminator": float(d_loss.detach()),
                "decorrelation": float(decor.detach()),
            }
            if not all(math.isfinite(v) for v in values.values()):
                path = checkpoint(epoch)
                raise TrainingDiverged(
                    f"non-finite loss in epoch {epoch + 1}: {values}", path
                )
            for key, value in values.items():
                sums[key] += value
            batches += 1

        curves.recognition.append(sums["recognition"] / batches)
        curves.generator.append(sums["generator"] / batches)
        curves.discriminator.append(sums["discriminator"] / batches)
        curves.decorrelation.append(sums["decorrelation"] / batches)
        checkpoint(epoch + 1)

    gen.eval()
    disc.eval()
    return TrainResult(
        generator=gen,
        discriminator=disc,
        curves=curves,
        config=config,
        side=side,
        checkpoint_path=ckpt,
    )
