"""Incremental, unsupervised concept formation.

The scheme is leader-style online clustering over the concept store: each
observation either joins the best-matching concept (whose regions are then
pulled toward it) or founds a new concept built from one small ball per
domain. Results depend on presentation order, which is inherent to the
online setting; for a fixed order and configuration the outcome is exactly
reproducible, down to the serialized bytes.

Feature extraction stays outside this module on purpose: the mapping from
raw observations to points is fixed input here and is never adapted.

Single-writer discipline: one caller folds observations; states are
immutable values, so readers may hold any snapshot safely.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .concepts import Concept, classify
from .errors import MissingDomainError, ObservationError, ValidationError
from .geometry import Point, SpaceSpec
from .regions import Ball, Box, overlaps

__all__ = [
    "LearnerConfig",
    "LearnerState",
    "Assignment",
    "observe",
    "observe_labeled",
    "fit_stream",
    "merge_overlapping",
]


@dataclass(frozen=True)
class LearnerConfig:
    """Knobs of the online clusterer.

    theta_new: minimum classification score to join an existing concept.
    eta: region update rate in (0, 1].
    r0: radius of the balls a brand-new concept starts with.
    max_concepts: optional hard cap; once reached, points are forced into
        the best existing concept regardless of theta_new.
    """

    theta_new: float = 0.5
    eta: float = 0.1
    r0: float = 0.05
    max_concepts: Optional[int] = None

    def __post_init__(self):
        if not (0.0 < float(self.theta_new) < 1.0):
            raise ValidationError(f"theta_new must lie in (0, 1), got {self.theta_new!r}")
        if not (0.0 < float(self.eta) <= 1.0):
            raise ValidationError(f"eta must lie in (0, 1], got {self.eta!r}")
        r0 = float(self.r0)
        if not (math.isfinite(r0) and r0 > 0):
            raise ValidationError(f"r0 must be finite and > 0, got {self.r0!r}")
        if self.max_concepts is not None and int(self.max_concepts) < 1:
            raise ValidationError(f"max_concepts must be >= 1, got {self.max_concepts!r}")


@dataclass(frozen=True, eq=False)
class LearnerState:
    """The evolving concept store plus the id counter that names new concepts."""

    space: SpaceSpec
    concepts: tuple = ()
    next_id: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "concepts", tuple(self.concepts))
        ids = [c.id for c in self.concepts]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"concept ids must be unique, got {ids}")
        if int(self.next_id) < 1:
            raise ValidationError("next_id must be >= 1")


@dataclass(frozen=True)
class Assignment:
    """Where one observation went: the concept, whether it was newly created,
    and the classification score at decision time (1.0 for a new concept)."""

    concept_id: str
    created: bool
    score: float
    index: Optional[int] = None
    item_id: Optional[str] = None


def _require_full_coverage(state: LearnerState, p: Point):
    for domain_id in state.space.domain_ids:
        if domain_id not in p:
            raise MissingDomainError(domain_id, "unsupervised learning needs full observations")


def _new_concept(state: LearnerState, p: Point, cfg: LearnerConfig, label=None) -> Concept:
    regions = {
        d.id: Ball(d.id, p.vector(d.id), cfg.r0)
        for d in state.space.domains
    }
    return Concept(
        id=f"c{state.next_id}",
        regions=regions,
        count=1,
        label=label,
        created_at=state.next_id,
    )


def _join(state: LearnerState, concept: Concept, p: Point, cfg: LearnerConfig) -> LearnerState:
    updated = concept.with_regions(
        {d: r.expand_toward(p, cfg.eta) for d, r in concept.regions.items()},
        count=concept.count + 1,
    )
    concepts = tuple(updated if c.id == concept.id else c for c in state.concepts)
    return replace(state, concepts=concepts)


def observe(state: LearnerState, p: Point, cfg: LearnerConfig):
    """Fold one unlabeled observation into the store.

    Returns ``(new_state, assignment)``. The point joins the top-ranked
    concept when its score clears theta_new; otherwise a new concept is
    created, unless max_concepts is exhausted, in which case the best
    existing concept absorbs the point.
    """
    _require_full_coverage(state, p)
    ranked = classify(p, state.concepts, state.space)
    if ranked and ranked[0].score >= cfg.theta_new:
        best = ranked[0]
    elif (
        ranked
        and cfg.max_concepts is not None
        and len(state.concepts) >= cfg.max_concepts
    ):
        best = ranked[0]
    else:
        concept = _new_concept(state, p, cfg)
        new_state = replace(
            state,
            concepts=state.concepts + (concept,),
            next_id=state.next_id + 1,
        )
        return new_state, Assignment(concept.id, created=True, score=1.0)

    winner = next(c for c in state.concepts if c.id == best.concept_id)
    return _join(state, winner, p, cfg), Assignment(best.concept_id, created=False, score=best.score)


def observe_labeled(state: LearnerState, p: Point, label: str, cfg: LearnerConfig) -> LearnerState:
    """Supervised correction path: pull the labeled concept toward the point.

    When no concept carries the label yet, a fresh labeled concept is
    created at the point.
    """
    _require_full_coverage(state, p)
    if not isinstance(label, str) or not label:
        raise ValidationError("label must be a non-empty string")
    for concept in state.concepts:
        if concept.label == label:
            return _join(state, concept, p, cfg)
    concept = _new_concept(state, p, cfg, label=label)
    return replace(
        state,
        concepts=state.concepts + (concept,),
        next_id=state.next_id + 1,
    )


def fit_stream(state: LearnerState, points: Sequence[Point], cfg: LearnerConfig, ids=None):
    """Fold a whole stream of observations, in the order given.

    Returns ``(final_state, log)`` where the log holds one Assignment per
    point, carrying its stream index and item id. The first failing point
    aborts the fold; its index is reported in the error.
    """
    points = list(points)
    if ids is None:
        ids = [str(i) for i in range(len(points))]
    else:
        ids = [str(x) for x in ids]
        if len(ids) != len(points):
            raise ValidationError(f"got {len(points)} points but {len(ids)} ids")
    log = []
    for i, (item_id, p) in enumerate(zip(ids, points)):
        try:
            state, assignment = observe(state, p, cfg)
        except (ValidationError, MissingDomainError) as e:
            raise ObservationError(i, item_id, str(e)) from e
        log.append(replace(assignment, index=i, item_id=item_id))
    return state, log


def _enclosing_ball(a: Ball, b: Ball) -> Ball:
    """Smallest ball containing two balls of the same domain."""
    d = float(np.linalg.norm(a.center - b.center))
    if d + b.radius <= a.radius:
        return a
    if d + a.radius <= b.radius:
        return b
    radius = (d + a.radius + b.radius) / 2.0
    direction = (b.center - a.center) / d
    center = a.center + (radius - a.radius) * direction
    return Ball(a.domain_id, center, radius)


def _bounding_box(a: Box, b: Box) -> Box:
    return Box(a.domain_id, np.minimum(a.low, b.low), np.maximum(a.high, b.high))


def _merge_pair(a: Concept, b: Concept, keep_id: str, created_at: int) -> Optional[Concept]:
    """Union of two concepts, or None when a shared domain mixes shapes."""
    regions = {}
    for domain_id in set(a.domain_ids) | set(b.domain_ids):
        ra = a.regions.get(domain_id)
        rb = b.regions.get(domain_id)
        if ra is None or rb is None:
            regions[domain_id] = ra or rb
        elif isinstance(ra, Ball) and isinstance(rb, Ball):
            regions[domain_id] = _enclosing_ball(ra, rb)
        elif isinstance(ra, Box) and isinstance(rb, Box):
            regions[domain_id] = _bounding_box(ra, rb)
        else:
            return None
    ordered = {d: regions[d] for d in sorted(regions)}
    return Concept(
        id=keep_id,
        regions=ordered,
        count=a.count + b.count,
        label=None,
        created_at=created_at,
    )


def _centroid_distance(a: Concept, b: Concept, space: SpaceSpec, shared) -> float:
    total = 0.0
    for domain_id in shared:
        w = space.domain(domain_id).weight
        diff = a.regions[domain_id].centroid() - b.regions[domain_id].centroid()
        total += w * float(np.linalg.norm(diff))
    return total


def merge_overlapping(state: LearnerState, overlap_threshold: float) -> LearnerState:
    """Hygiene pass: fuse redundant unlabeled concepts, repeated to fixpoint.

    A pair qualifies when both concepts are unlabeled, they share at least
    one domain, their regions overlap in every shared domain, and their
    weighted centroid distance is within the threshold. The survivor keeps
    the earlier concept's id and the summed count.
    """
    overlap_threshold = float(overlap_threshold)
    if not (math.isfinite(overlap_threshold) and overlap_threshold >= 0):
        raise ValidationError(f"overlap threshold must be finite and >= 0, got {overlap_threshold}")

    concepts = list(state.concepts)
    merged_any = True
    while merged_any:
        merged_any = False
        concepts.sort(key=lambda c: c.created_at)
        for i in range(len(concepts)):
            if merged_any:
                break
            for j in range(i + 1, len(concepts)):
                a, b = concepts[i], concepts[j]
                if a.label is not None or b.label is not None:
                    continue
                shared = sorted(a.domain_ids & b.domain_ids)
                if not shared:
                    continue
                if not all(overlaps(a.regions[d], b.regions[d]) for d in shared):
                    continue
                if _centroid_distance(a, b, state.space, shared) > overlap_threshold:
                    continue
                fused = _merge_pair(a, b, keep_id=a.id, created_at=a.created_at)
                if fused is None:
                    continue
                concepts[i] = fused
                del concepts[j]
                merged_any = True
                break
    return replace(state, concepts=tuple(concepts))
