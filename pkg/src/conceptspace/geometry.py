"""Metric structure of a conceptual space.

A space is an ordered product of domains. Each domain bundles a handful of
quality dimensions (hue, size, one latent coordinate) and measures distance
with the plain Euclidean norm. Distance between full points is the weighted
city-block sum of the per-domain distances, so closeness in one domain never
averages away a gross mismatch in another. Similarity decays exponentially
with that combined distance.

Coordinates are expected to arrive normalized to roughly the unit range;
nothing here rescales. Non-finite values are rejected when a point is built,
which keeps the hot-path operations free of per-call checks.

All types in this module are immutable after construction and every
operation is a pure function.
"""

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainMismatchError,
    MissingDomainError,
    ValidationError,
)

__all__ = [
    "DomainSpec",
    "SpaceSpec",
    "Point",
    "as_vector",
    "intra_domain_distance",
    "combined_distance",
    "similarity",
    "interpolate",
    "between",
]


def as_vector(values, context: str) -> np.ndarray:
    """Coerce to a read-only, finite, non-empty 1-D float64 array."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(
            f"{context}: expected a non-empty 1-D vector, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{context}: non-finite vector entry")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class DomainSpec:
    """One domain: an id, ordered dimension labels, and a salience weight.

    The weight scales this domain's contribution to the combined distance.
    Weights are not normalized; only their ratios matter downstream.
    """

    id: str
    dim_names: tuple
    weight: float = 1.0

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("domain id must be a non-empty string")
        names = tuple(self.dim_names)
        if not names or any(not isinstance(n, str) or not n for n in names):
            raise ValidationError(
                f"domain {self.id!r}: dim_names must be a non-empty list of non-empty strings"
            )
        object.__setattr__(self, "dim_names", names)
        w = float(self.weight)
        if not math.isfinite(w) or w < 0:
            raise ValidationError(
                f"domain {self.id!r}: weight must be finite and >= 0, got {self.weight!r}"
            )
        object.__setattr__(self, "weight", w)

    @property
    def dim_count(self) -> int:
        return len(self.dim_names)


@dataclass(frozen=True)
class SpaceSpec:
    """The schema of a space: ordered domains plus the similarity sensitivity.

    ``sensitivity`` is the decay rate c in ``exp(-c * distance)``; larger
    values make similarity fall off faster.
    """

    domains: tuple
    sensitivity: float = 1.0

    def __post_init__(self):
        doms = tuple(self.domains)
        if not doms:
            raise ValidationError("a space needs at least one domain")
        if any(not isinstance(d, DomainSpec) for d in doms):
            raise ValidationError("domains must be DomainSpec instances")
        ids = [d.id for d in doms]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"domain ids must be unique, got {ids}")
        object.__setattr__(self, "domains", doms)
        c = float(self.sensitivity)
        if not math.isfinite(c) or c <= 0:
            raise ValidationError(f"sensitivity must be finite and > 0, got {self.sensitivity!r}")
        object.__setattr__(self, "sensitivity", c)

    @property
    def domain_ids(self) -> tuple:
        return tuple(d.id for d in self.domains)

    def domain(self, domain_id: str) -> DomainSpec:
        for d in self.domains:
            if d.id == domain_id:
                return d
        raise MissingDomainError(domain_id, "not declared in this space")


@dataclass(frozen=True, eq=False)
class Point:
    """One observation: a real vector per covered domain.

    A point need not cover every domain of a space; operations state their
    own coverage requirements. Vectors are validated and frozen here.
    """

    coords: Mapping[str, Sequence]

    def __post_init__(self):
        frozen = {}
        for domain_id, values in dict(self.coords).items():
            if not isinstance(domain_id, str) or not domain_id:
                raise ValidationError("point coords must be keyed by non-empty domain ids")
            frozen[domain_id] = as_vector(values, f"point coords for domain {domain_id!r}")
        object.__setattr__(self, "coords", MappingProxyType(frozen))

    @property
    def domain_ids(self) -> frozenset:
        return frozenset(self.coords)

    def __contains__(self, domain_id: str) -> bool:
        return domain_id in self.coords

    def vector(self, domain_id: str) -> np.ndarray:
        try:
            return self.coords[domain_id]
        except KeyError:
            raise MissingDomainError(domain_id, "absent from point") from None

    def __repr__(self) -> str:
        parts = ", ".join(f"{d}={list(v)}" for d, v in self.coords.items())
        return f"Point({parts})"


def _domain_vectors(x: Point, y: Point, d: DomainSpec):
    xv = x.vector(d.id)
    yv = y.vector(d.id)
    if xv.size != d.dim_count or yv.size != d.dim_count:
        raise DimensionMismatchError(
            f"domain {d.id!r} expects {d.dim_count} dims, got {xv.size} and {yv.size}"
        )
    return xv, yv


def intra_domain_distance(x: Point, y: Point, d: DomainSpec) -> float:
    """Euclidean distance between two points within a single domain."""
    xv, yv = _domain_vectors(x, y, d)
    return float(np.linalg.norm(xv - yv))


def combined_distance(x: Point, y: Point, s: SpaceSpec) -> float:
    """Weighted city-block sum of the per-domain Euclidean distances.

    Both points must cover every domain of ``s``. With all weights positive
    this is a metric on the product space; zero-weight domains contribute
    nothing (they are still required to be present and well-formed).
    """
    total = 0.0
    for d in s.domains:
        total += d.weight * intra_domain_distance(x, y, d)
    return total


def similarity(x: Point, y: Point, s: SpaceSpec) -> float:
    """Exponentially decaying similarity, in (0, 1].

    Equals 1 exactly when the combined distance is 0 and is strictly
    decreasing in distance.
    """
    return math.exp(-s.sensitivity * combined_distance(x, y, s))


def interpolate(a: Point, b: Point, t: float) -> Point:
    """Linear interpolation ``(1 - t) * a + t * b``, coordinatewise per domain.

    ``t`` must lie in [0, 1]; ``t=0`` returns a's coordinates, ``t=1`` b's.
    The two points must cover identical domain sets.
    """
    t = float(t)
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"interpolation parameter must lie in [0, 1], got {t}")
    if a.domain_ids != b.domain_ids:
        raise DomainMismatchError(
            f"points cover different domain sets: {sorted(a.domain_ids)} vs {sorted(b.domain_ids)}"
        )
    mixed = {}
    for domain_id, av in a.coords.items():
        bv = b.vector(domain_id)
        if av.size != bv.size:
            raise DimensionMismatchError(
                f"domain {domain_id!r}: vector lengths differ, {av.size} vs {bv.size}"
            )
        mixed[domain_id] = (1.0 - t) * av + t * bv
    return Point(mixed)


def between(a: Point, m: Point, b: Point, s: SpaceSpec, tol: float = 1e-9) -> bool:
    """Metric betweenness: does ``m`` lie on a shortest path from ``a`` to ``b``?

    True iff ``d(a, m) + d(m, b) <= d(a, b) + tol`` under the combined
    distance. Points produced by :func:`interpolate` satisfy this for any
    ``t`` in [0, 1].
    """
    tol = float(tol)
    if not (math.isfinite(tol) and tol >= 0):
        raise ValidationError(f"tolerance must be finite and >= 0, got {tol}")
    return combined_distance(a, m, s) + combined_distance(m, b, s) <= combined_distance(a, b, s) + tol
