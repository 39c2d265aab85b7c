"""Convex regions within a single domain.

A region is the geometric stand-in for a property such as "red" or "round".
Two shapes are supported, balls and axis-aligned boxes. Both admit exact
membership tests, exact point-to-region distance, and an update that pulls
the region toward an observation without giving up convexity or validity.

Regions are immutable values; updates return new regions.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainMismatchError,
    ValidationError,
)
from .geometry import Point, as_vector

__all__ = ["Region", "Ball", "Box", "overlaps", "intersect_boxes"]


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not (0.0 < eta <= 1.0):
        raise ValidationError(f"update rate must lie in (0, 1], got {eta}")
    return eta


@dataclass(frozen=True, eq=False)
class Region:
    """Base class: a convex set inside one domain, identified by domain_id."""

    domain_id: str

    def _vec(self, point) -> np.ndarray:
        """Pull this region's domain vector from a Point (or accept a raw vector)."""
        if isinstance(point, Point):
            v = point.vector(self.domain_id)
        else:
            v = np.asarray(point, dtype=np.float64)
        if v.shape != (self.dim_count,):
            raise DimensionMismatchError(
                f"region in domain {self.domain_id!r} is {self.dim_count}-D, "
                f"got a vector of shape {v.shape}"
            )
        return v

    @property
    def dim_count(self) -> int:
        raise NotImplementedError

    def contains(self, point) -> bool:
        """Boundary-inclusive membership test."""
        raise NotImplementedError

    def distance_to(self, point) -> float:
        """Euclidean distance from the point to the nearest point of the region."""
        raise NotImplementedError

    def membership(self, point, sensitivity: float) -> float:
        """Graded membership in (0, 1]: exactly 1 inside, exponential decay outside."""
        sensitivity = float(sensitivity)
        if not (math.isfinite(sensitivity) and sensitivity > 0):
            raise ValidationError(f"sensitivity must be finite and > 0, got {sensitivity}")
        d = self.distance_to(point)
        return 1.0 if d == 0.0 else math.exp(-sensitivity * d)

    def expand_toward(self, point, eta: float) -> "Region":
        """Pull the region toward the point at rate eta.

        Contract: the updated region's distance to the point is at most
        ``(1 - eta)`` times the old distance, and points already contained
        leave the region untouched.
        """
        raise NotImplementedError

    def centroid(self) -> np.ndarray:
        """A representative interior point, used for tie-breaking and reports."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Ball(Region):
    """A closed Euclidean ball."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        if not isinstance(self.domain_id, str) or not self.domain_id:
            raise ValidationError("region domain_id must be a non-empty string")
        object.__setattr__(self, "center", as_vector(self.center, "ball center"))
        r = float(self.radius)
        if not math.isfinite(r) or r <= 0:
            raise ValidationError(f"ball radius must be finite and > 0, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim_count(self) -> int:
        return self.center.size

    def contains(self, point) -> bool:
        v = self._vec(point)
        return bool(np.linalg.norm(v - self.center) <= self.radius)

    def distance_to(self, point) -> float:
        v = self._vec(point)
        return max(0.0, float(np.linalg.norm(v - self.center)) - self.radius)

    def expand_toward(self, point, eta: float) -> "Ball":
        eta = _check_eta(eta)
        v = self._vec(point)
        if self.contains(v):
            return self
        # Moving the center eta of the way suffices: the leftover distance is
        # (1 - eta) * |p - c| - r <= (1 - eta) * (|p - c| - r).
        new_center = self.center + eta * (v - self.center)
        return Ball(self.domain_id, new_center, self.radius)

    def centroid(self) -> np.ndarray:
        return self.center


@dataclass(frozen=True, eq=False)
class Box(Region):
    """An axis-aligned box; ``low`` and ``high`` are the componentwise corners."""

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self):
        if not isinstance(self.domain_id, str) or not self.domain_id:
            raise ValidationError("region domain_id must be a non-empty string")
        low = as_vector(self.low, "box low corner")
        high = as_vector(self.high, "box high corner")
        if low.size != high.size:
            raise ValidationError(
                f"box corners disagree on dimension: {low.size} vs {high.size}"
            )
        if not np.all(low <= high):
            raise ValidationError("box low corner must be <= high corner componentwise")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    @property
    def dim_count(self) -> int:
        return self.low.size

    def contains(self, point) -> bool:
        v = self._vec(point)
        return bool(np.all((v >= self.low) & (v <= self.high)))

    def distance_to(self, point) -> float:
        v = self._vec(point)
        delta = v - np.clip(v, self.low, self.high)
        d = float(np.linalg.norm(delta))
        if d == 0.0 and np.any(delta != 0.0):
            # squaring subnormal gaps underflows; the inf-norm keeps the
            # outside-iff-positive contract (within sqrt(n) of the truth)
            d = float(np.max(np.abs(delta)))
        return d

    def expand_toward(self, point, eta: float) -> "Box":
        eta = _check_eta(eta)
        v = self._vec(point)
        if self.contains(v):
            return self
        # Each violated face moves eta of the way toward enclosing the point,
        # so the clamp residual shrinks by exactly (1 - eta) per axis.
        new_low = np.where(v < self.low, self.low + eta * (v - self.low), self.low)
        new_high = np.where(v > self.high, self.high + eta * (v - self.high), self.high)
        return Box(self.domain_id, new_low, new_high)

    def centroid(self) -> np.ndarray:
        return (self.low + self.high) / 2.0


def _check_same_domain(a: Region, b: Region, op: str):
    if a.domain_id != b.domain_id:
        raise DomainMismatchError(
            f"{op} needs regions from one domain, got {a.domain_id!r} and {b.domain_id!r}"
        )
    if a.dim_count != b.dim_count:
        raise DimensionMismatchError(
            f"{op}: regions disagree on dimension, {a.dim_count} vs {b.dim_count}"
        )


def overlaps(a: Region, b: Region) -> bool:
    """Do the two regions share at least one point? Symmetric, boundary counts."""
    _check_same_domain(a, b, "overlap test")
    if isinstance(a, Ball) and isinstance(b, Ball):
        return bool(np.linalg.norm(a.center - b.center) <= a.radius + b.radius)
    if isinstance(a, Box) and isinstance(b, Box):
        return bool(np.all(a.low <= b.high) and np.all(b.low <= a.high))
    ball, box = (a, b) if isinstance(a, Ball) else (b, a)
    return box.distance_to(ball.center) <= ball.radius


def intersect_boxes(a: Box, b: Box):
    """Exact intersection of two boxes, or None when they are disjoint.

    Only boxes intersect to a region of the same shape; for balls use
    :func:`overlaps`, which gives the emptiness verdict without materializing
    a non-ball intersection.
    """
    if not (isinstance(a, Box) and isinstance(b, Box)):
        raise ValidationError("intersection is only defined for two box regions")
    _check_same_domain(a, b, "intersection")
    low = np.maximum(a.low, b.low)
    high = np.minimum(a.high, b.high)
    if np.any(low > high):
        return None
    return Box(a.domain_id, low, high)
