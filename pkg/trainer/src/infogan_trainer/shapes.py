"""Synthetic 2D-shapes corpus: binary rasters with known generative params.

Each sample is a square grayscale grid with foreground exactly 1.0 on
background exactly 0.0, drawn as a circle, triangle, or rectangle at a
known center, rotation, and size. The parameters are kept with the image
so downstream representation checks can compare learned codes against the
ground truth that produced each picture.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

__all__ = ["ShapeSample", "generate_dataset", "save_dataset", "load_dataset", "CLASSES"]

CLASSES = ("circle", "triangle", "rectangle")

# rectangle aspect and triangle base keep every class pi-periodic at most,
# so a rotation in [0, pi) is never aliased
RECT_ASPECT = 1.6
TRI_HALF_BASE = 0.35


@dataclass(frozen=True)
class ShapeSample:
    """One rendered shape and the parameters that produced it."""

    image: np.ndarray = field(compare=False)
    shape_class: str
    x: float
    y: float
    rotation: float
    size: float

    def __post_init__(self):
        if self.shape_class not in CLASSES:
            raise ValueError(f"unknown shape class {self.shape_class!r}")
        if not (0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0):
            raise ValueError("center must lie in the unit square")
        if not 0.0 <= self.rotation < math.pi:
            raise ValueError("rotation must lie in [0, pi)")
        if not 0.2 <= self.size <= 0.6:
            raise ValueError("size must lie in [0.2, 0.6]")

    @property
    def params(self) -> Dict[str, object]:
        return {
            "shape_class": self.shape_class,
            "x": self.x,
            "y": self.y,
            "rotation": self.rotation,
            "size": self.size,
        }


def _circumradius(shape_class: str, size: float) -> float:
    if shape_class == "circle":
        return size / 2.0
    if shape_class == "rectangle":
        return 0.5 * math.hypot(size, size / RECT_ASPECT)
    return max(size / 2.0, math.hypot(TRI_HALF_BASE * size, size / 2.0))


def _render(shape_class: str, x: float, y: float, rotation: float, size: float, side: int) -> np.ndarray:
    centers = (np.arange(side) + 0.5) / side
    px, py = np.meshgrid(centers, centers)
    dx, dy = px - x, py - y
    cos_r, sin_r = math.cos(rotation), math.sin(rotation)
    # rotate into the shape's local frame
    lx = cos_r * dx + sin_r * dy
    ly = -sin_r * dx + cos_r * dy
    if shape_class == "circle":
        inside = dx * dx + dy * dy <= (size / 2.0) ** 2
    elif shape_class == "rectangle":
        inside = (np.abs(lx) <= size / 2.0) & (np.abs(ly) <= size / (2.0 * RECT_ASPECT))
    else:
        apex = np.array([0.0, -size / 2.0])
        left = np.array([-TRI_HALF_BASE * size, size / 2.0])
        right = np.array([TRI_HALF_BASE * size, size / 2.0])
        inside = np.ones_like(lx, dtype=bool)
        for a, b in ((apex, left), (left, right), (right, apex)):
            cross = (b[0] - a[0]) * (ly - a[1]) - (b[1] - a[1]) * (lx - a[0])
            inside &= cross <= 0.0
    return inside.astype(np.float32)


def generate_dataset(n: int, seed: int, side: int = 32) -> List[ShapeSample]:
    """Render n class-balanced samples, bit-reproducibly for a fixed seed.

    Classes rotate round-robin so counts differ by at most one. Centers
    are drawn so the whole shape, at its sampled rotation, stays on the
    canvas; circles store rotation 0.0 because rotating one is a no-op.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if side < 8:
        raise ValueError("side must be at least 8")
    rng = np.random.default_rng(seed)
    samples = []
    margin = 1.5 / side
    for i in range(n):
        shape_class = CLASSES[i % len(CLASSES)]
        size = float(rng.uniform(0.2, 0.6))
        rotation = 0.0 if shape_class == "circle" else float(rng.uniform(0.0, math.pi))
        reach = _circumradius(shape_class, size) + margin
        x = float(rng.uniform(reach, 1.0 - reach))
        y = float(rng.uniform(reach, 1.0 - reach))
        image = _render(shape_class, x, y, rotation, size, side)
        samples.append(
            ShapeSample(
                image=image, shape_class=shape_class, x=x, y=y, rotation=rotation, size=size
            )
        )
    return samples


def save_dataset(samples: List[ShapeSample], path) -> None:
    np.savez_compressed(
        path,
        images=np.stack([s.image for s in samples]),
        shape_class=np.array([s.shape_class for s in samples]),
        x=np.array([s.x for s in samples]),
        y=np.array([s.y for s in samples]),
        rotation=np.array([s.rotation for s in samples]),
        size=np.array([s.size for s in samples]),
    )


def load_dataset(path) -> List[ShapeSample]:
    data = np.load(path, allow_pickle=False)
    return [
        ShapeSample(
            image=data["images"][i],
            shape_class=str(data["shape_class"][i]),
            x=float(data["x"][i]),
            y=float(data["y"][i]),
            rotation=float(data["rotation"][i]),
            size=float(data["size"][i]),
        )
        for i in range(data["images"].shape[0])
    ]
