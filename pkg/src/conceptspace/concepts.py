"""Multi-domain concepts and classification by region membership.

A concept ties together one region per covered domain: "apple" is a ball in
the color domain plus a ball in the shape domain. A point is a strict member
when it sits inside every region of the concept; partial observations are
classified by projection onto the domains they do provide and flagged
non-strict.

Classification is read-only and deterministic. Stores are treated as
immutable snapshots; mutation happens only in the learning module.
"""

from dataclasses import dataclass, replace
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import ValidationError
from .geometry import Point, SpaceSpec
from .regions import Region, overlaps

__all__ = [
    "Concept",
    "Classification",
    "classify",
    "project_concept",
    "concept_overlap",
]


@dataclass(frozen=True, eq=False)
class Concept:
    """A labeled (or anonymous) bundle of per-domain regions.

    ``count`` tallies the observations that shaped the concept and
    ``created_at`` is a monotone sequence number fixing creation order.
    """

    id: str
    regions: Mapping[str, Region]
    count: int = 1
    label: Optional[str] = None
    created_at: int = 0

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("concept id must be a non-empty string")
        regs = dict(self.regions)
        if not regs:
            raise ValidationError(f"concept {self.id!r} needs at least one region")
        for domain_id, region in regs.items():
            if not isinstance(region, Region):
                raise ValidationError(f"concept {self.id!r}: {domain_id!r} is not a Region")
            if region.domain_id != domain_id:
                raise ValidationError(
                    f"concept {self.id!r}: region for {domain_id!r} "
                    f"belongs to domain {region.domain_id!r}"
                )
        object.__setattr__(self, "regions", MappingProxyType(regs))
        if int(self.count) < 1:
            raise ValidationError(f"concept {self.id!r}: count must be >= 1")
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "created_at", int(self.created_at))

    @property
    def domain_ids(self) -> frozenset:
        return frozenset(self.regions)

    def with_regions(self, regions: Mapping[str, Region], count: Optional[int] = None) -> "Concept":
        return replace(
            self,
            regions=dict(regions),
            count=self.count if count is None else count,
        )


@dataclass(frozen=True)
class Classification:
    """One ranked answer: how well a point fits one concept.

    ``score`` is the minimum of the evaluated per-domain memberships
    (weakest-link conjunction); ``strict`` means the point sat inside every
    region of the concept with none of the concept's domains skipped.
    """

    concept_id: str
    strict: bool
    score: float
    per_domain: Mapping[str, float]
    label: Optional[str] = None


def _tie_break_distance(p: Point, concept: Concept, s: SpaceSpec, domain_ids) -> float:
    """Weighted distance from the point to the concept's region centroids."""
    total = 0.0
    for domain_id in domain_ids:
        w = s.domain(domain_id).weight
        diff = p.vector(domain_id) - concept.regions[domain_id].centroid()
        total += w * float(np.linalg.norm(diff))
    return total


def classify(p: Point, store: Sequence[Concept], s: SpaceSpec) -> list:
    """Rank every applicable concept for the point.

    Each concept is scored on the domains the point actually provides
    (projection semantics; skipped domains make the result non-strict).
    Concepts sharing no domain with the point are omitted, so an empty store
    or a fully foreign point yields an empty list.

    The order is total and reproducible: strict first, then score descending,
    then weighted centroid distance ascending, then concept id.
    """
    if not p.coords:
        raise ValidationError("cannot classify a point with no domain coordinates")
    rows = []
    for concept in store:
        evaluated = {}
        skipped = False
        for domain_id, region in concept.regions.items():
            if domain_id in p:
                evaluated[domain_id] = region.membership(p, s.sensitivity)
            else:
                skipped = True
        if not evaluated:
            continue
        score = min(evaluated.values())
        strict = (not skipped) and all(v == 1.0 for v in evaluated.values())
        tie = _tie_break_distance(p, concept, s, evaluated)
        rows.append(
            (
                not strict,
                -score,
                tie,
                concept.id,
                Classification(
                    concept_id=concept.id,
                    strict=strict,
                    score=score,
                    per_domain=evaluated,
                    label=concept.label,
                ),
            )
        )
    rows.sort(key=lambda r: r[:4])
    return [r[4] for r in rows]


def project_concept(c: Concept, domain_id: str):
    """The concept's region in one domain, or None when it does not cover it."""
    return c.regions.get(domain_id)


def concept_overlap(a: Concept, b: Concept) -> dict:
    """Per-domain overlap verdicts over the domains covered by both concepts."""
    shared = sorted(a.domain_ids & b.domain_ids)
    return {d: overlaps(a.regions[d], b.regions[d]) for d in shared}
