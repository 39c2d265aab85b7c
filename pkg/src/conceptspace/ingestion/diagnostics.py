"""Representation quality checks.

Two complementary probes of whether a learned embedding respects the
generative factors recorded in each record's ``meta``:

* smoothness: do small factor changes produce small latent moves? Measured
  as the rank correlation between paired factor distances and latent
  distances, so any monotone distortion of scale is forgiven.
* interpolation betweenness: walking the straight line between two latent
  codes, do the nearest dataset items along the way look like factor
  mixtures of the endpoints? For each sampled pair we interpolate in latent
  space, find the closest item to each waypoint, and check that its factors
  fall inside the interval the endpoints span (plus slack).
"""

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import spearmanr

from ..errors import ValidationError

__all__ = [
    "smoothness_score",
    "smoothness_from_records",
    "interpolation_betweenness_report",
    "BetweennessReport",
    "shuffle_vectors",
]


def smoothness_score(pairs) -> float:
    """Spearman rank correlation of (input distance, latent distance) pairs.

    The caller supplies the distances, typically generative-parameter
    distances against embedding distances over the same item pairs. Ties
    get average ranks. Scores near 1 mean the embedding orders
    neighborhoods the way the inputs do; near 0 means no relation.
    """
    input_d = []
    latent_d = []
    for pair in pairs:
        a, b = pair
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValidationError(f"distances must be finite, got {pair!r}")
        input_d.append(a)
        latent_d.append(b)
    if len(input_d) < 3:
        raise ValidationError(f"need at least 3 distance pairs, got {len(input_d)}")
    if max(input_d) == min(input_d):
        raise ValidationError("input distances are all equal; correlation is undefined")
    if max(latent_d) == min(latent_d):
        raise ValidationError("latent distances are all equal; correlation is undefined")
    return float(spearmanr(input_d, latent_d).statistic)


def _meta_vector(rec, keys: Sequence[str]) -> np.ndarray:
    values = []
    for key in keys:
        if key not in rec.meta:
            raise ValidationError(f"record for item {rec.item_id!r} lacks meta key {key!r}")
        v = rec.meta[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(f"meta key {key!r} of item {rec.item_id!r} is not numeric")
        values.append(float(v))
    return np.array(values)


def _factor_keys(records, keys: Optional[Sequence[str]]) -> Tuple[str, ...]:
    if keys is not None:
        keys = tuple(keys)
        if not keys:
            raise ValidationError("need at least one factor key")
        return keys
    shared = None
    for rec in records:
        numeric = {
            k
            for k, v in rec.meta.items()
            if isinstance(v, (int, float)) and not isinstance(v, bool)
        }
        shared = numeric if shared is None else shared & numeric
    if not shared:
        raise ValidationError("records share no numeric meta keys to use as factors")
    return tuple(sorted(shared))


def _factor_matrix(records, keys):
    keys = _factor_keys(records, keys)
    factors = np.array([_meta_vector(rec, keys) for rec in records])
    width = records[0].vector.shape[0]
    for rec in records:
        if rec.vector.shape[0] != width:
            raise ValidationError("records mix latent vector widths")
    latents = np.array([rec.vector for rec in records])
    return factors, latents


def smoothness_from_records(records, keys: Optional[Sequence[str]] = None) -> float:
    """Smoothness over every record pair, factors drawn from ``meta``.

    ``keys`` names the numeric meta entries acting as generative factors;
    by default all numeric keys shared by every record, sorted.
    """
    records = list(records)
    if len(records) < 3:
        raise ValidationError(f"need at least 3 records, got {len(records)}")
    factors, latents = _factor_matrix(records, keys)
    pairs = [
        (
            float(np.linalg.norm(factors[i] - factors[j])),
            float(np.linalg.norm(latents[i] - latents[j])),
        )
        for i, j in itertools.combinations(range(len(records)), 2)
    ]
    return smoothness_score(pairs)


@dataclass(frozen=True)
class BetweennessReport:
    """Outcome of the interpolation check; the headline is the fraction."""

    fraction_satisfied: float
    pairs_checked: int
    mean_deviation: float


def interpolation_betweenness_report(
    records,
    keys: Optional[Sequence[str]] = None,
    n_pairs: int = 200,
    ts: Sequence[float] = (0.25, 0.5, 0.75),
    slack: float = 0.3,
    seed: int = 0,
) -> BetweennessReport:
    """Check that latent interpolants stay among factor-intermediate items.

    For each sampled record pair (a, b) and each t in ``ts``, the nearest
    dataset item to the latent point (1-t)a + tb is located; the pair
    satisfies the check when every such item's factors lie within the
    interval spanned by a's and b's factors, widened on each side by
    ``slack`` times the pair's factor distance. Pairs with identical
    factors are trivially satisfied. ``mean_deviation`` reports the mean
    overshoot beyond the unwidened interval across all waypoints.
    """
    records = list(records)
    if len(records) < 3:
        raise ValidationError(f"need at least 3 records, got {len(records)}")
    if not (0 < slack):
        raise ValidationError(f"slack must be positive, got {slack}")
    for t in ts:
        if not (0.0 < float(t) < 1.0):
            raise ValidationError(f"interpolation weights must lie in (0, 1), got {t}")
    factors, latents = _factor_matrix(records, keys)

    rng = random.Random(seed)
    all_pairs = list(itertools.combinations(range(len(records)), 2))
    if len(all_pairs) > n_pairs:
        pairs = rng.sample(all_pairs, n_pairs)
    else:
        pairs = all_pairs

    satisfied = 0
    deviations = []
    for i, j in pairs:
        base = float(np.linalg.norm(factors[i] - factors[j]))
        if base == 0.0:
            satisfied += 1
            continue
        lo = np.minimum(factors[i], factors[j])
        hi = np.maximum(factors[i], factors[j])
        margin = slack * base
        ok = True
        for t in ts:
            t = float(t)
            probe = (1.0 - t) * latents[i] + t * latents[j]
            k = int(np.argmin(np.linalg.norm(latents - probe, axis=1)))
            overshoot = np.maximum(factors[k] - hi, lo - factors[k])
            deviations.append(float(max(0.0, float(np.max(overshoot)))))
            if np.any(overshoot > margin):
                ok = False
        if ok:
            satisfied += 1
    return BetweennessReport(
        fraction_satisfied=satisfied / len(pairs),
        pairs_checked=len(pairs),
        mean_deviation=float(np.mean(deviations)) if deviations else 0.0,
    )


def shuffle_vectors(records, seed: int = 0):
    """Reassign vectors among records at random; a null model for the probes."""
    records = list(records)
    vectors = [rec.vector for rec in records]
    rng = random.Random(seed)
    rng.shuffle(vectors)
    return [
        type(rec)(rec.item_id, rec.domain_id, vec, rec.meta)
        for rec, vec in zip(records, vectors)
    ]
