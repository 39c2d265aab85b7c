"""Exports: latent-code files for the concept engine, traversal grids.

The latent-code file is the one cross-component contract: JSON Lines with
item_id, domain_id "shape", the reconstructed code vector, and the
generative parameters as meta. Traversal grids are plain PGM images for
eyeballing what each code dimension does.
"""

import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import torch

from .models import Discriminator, Generator
from .shapes import ShapeSample
from .train import TrainerConfig

__all__ = ["export_latents", "export_traversals", "write_pgm"]


def export_latents(
    discriminator: Discriminator,
    dataset: Sequence[ShapeSample],
    path,
    batch_size: int = 256,
) -> int:
    """Write one record per sample: codes read off the real image, params
    as meta. Returns the record count."""
    discriminator.eval()
    images = torch.from_numpy(np.stack([s.image for s in dataset])).unsqueeze(1)
    rows = []
    with torch.no_grad():
        for start in range(0, len(dataset), batch_size):
            rows.append(discriminator.codes(images[start : start + batch_size]))
    codes = torch.cat(rows).numpy()
    with open(path, "w") as handle:
        for i, sample in enumerate(dataset):
            record = {
                "item_id": f"s{i:05d}",
                "domain_id": "shape",
                "vector": [float(v) for v in codes[i]],
                "meta": sample.params,
            }
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    return len(dataset)


def write_pgm(image: np.ndarray, path) -> None:
    """Binary PGM, values taken as [0, 1] grayscale."""
    if image.ndim != 2:
        raise ValueError("PGM output needs a 2-D grayscale array")
    data = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    body = (data * 255.0).round().astype(np.uint8)
    height, width = body.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(body.tobytes())


def export_traversals(
    generator: Generator,
    config: TrainerConfig,
    path,
    axis: Optional[int] = None,
    steps: int = 8,
    seed: int = 0,
) -> np.ndarray:
    """Render a grid that sweeps one code (or every code) across its range
    while everything else stays fixed: one row per swept axis, one column
    per step. Writes the grid as PGM and returns it as an array."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    axes = range(config.n_latent) if axis is None else [axis]
    for a in axes:
        if not 0 <= a < config.n_latent:
            raise ValueError(f"axis {a} out of range for {config.n_latent} codes")
    values = torch.linspace(-1.0, 1.0, steps) if steps > 1 else torch.zeros(1)
    rng = torch.Generator().manual_seed(seed)
    noise = torch.randn(1, config.noise_dim, generator=rng)
    side = generator.side
    generator.eval()
    grid = np.zeros((len(list(axes)) * side, steps * side), dtype=np.float32)
    with torch.no_grad():
        for row, a in enumerate(axes):
            for col, value in enumerate(values):
                codes = torch.zeros(1, config.n_latent + config.n_categorical)
                codes[0, a] = value
                image = generator(noise, codes)[0, 0].numpy()
                grid[row * side : (row + 1) * side, col * side : (col + 1) * side] = image
    write_pgm(grid, path)
    return grid
