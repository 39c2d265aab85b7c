"""Space configuration and concept store persistence.

Both artifacts are JSON documents: a config declares the domains, the
distance sensitivity and the learner defaults; a store carries the config
it was initialized with plus every learned concept. The store embeds a
fingerprint of its space so a store file cannot silently be replayed
against a differently-shaped space. Writes go through a temp file and an
atomic rename, so readers only ever observe complete documents.
"""

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .concepts import Concept
from .errors import StoreError, ValidationError
from .geometry import DomainSpec, SpaceSpec
from .learning import LearnerConfig, LearnerState
from .regions import Ball, Box, Region

__all__ = [
    "STORE_FORMAT",
    "space_fingerprint",
    "space_from_doc",
    "space_to_doc",
    "store_to_doc",
    "store_from_doc",
    "load_json",
    "atomic_write_json",
    "load_config",
    "load_store",
    "save_store",
]

STORE_FORMAT = "conceptspace-store"

_SPACE_KEYS = {"domains", "sensitivity", "learner"}
_DOMAIN_KEYS = {"id", "dim_names", "weight"}
_LEARNER_KEYS = {"theta_new", "eta", "r0", "max_concepts"}
_STORE_KEYS = {"format", "space", "fingerprint", "next_id", "concepts"}
_CONCEPT_KEYS = {"id", "regions", "count", "label", "created_at"}


def _require_keys(doc: dict, allowed: set, required: set, what: str) -> None:
    if not isinstance(doc, dict):
        raise ValidationError(f"{what} must be an object, got {type(doc).__name__}")
    unknown = doc.keys() - allowed
    if unknown:
        raise ValidationError(f"{what} has unknown keys: {', '.join(sorted(unknown))}")
    missing = required - doc.keys()
    if missing:
        raise ValidationError(f"{what} is missing keys: {', '.join(sorted(missing))}")


def space_from_doc(doc: dict) -> Tuple[SpaceSpec, LearnerConfig]:
    """Build the space and learner defaults from a config document."""
    _require_keys(doc, _SPACE_KEYS, {"domains"}, "space config")
    raw_domains = doc["domains"]
    if not isinstance(raw_domains, list) or not raw_domains:
        raise ValidationError("space config needs a non-empty domains array")
    domains = []
    for i, entry in enumerate(raw_domains):
        _require_keys(entry, _DOMAIN_KEYS, {"id", "dim_names"}, f"domain entry {i}")
        domains.append(
            DomainSpec(
                id=entry["id"],
                dim_names=tuple(entry["dim_names"]),
                weight=float(entry.get("weight", 1.0)),
            )
        )
    space = SpaceSpec(domains=tuple(domains), sensitivity=float(doc.get("sensitivity", 1.0)))
    raw_learner = doc.get("learner", {})
    _require_keys(raw_learner, _LEARNER_KEYS, set(), "learner config")
    learner = LearnerConfig(
        theta_new=float(raw_learner.get("theta_new", 0.5)),
        eta=float(raw_learner.get("eta", 0.1)),
        r0=float(raw_learner.get("r0", 0.05)),
        max_concepts=raw_learner.get("max_concepts"),
    )
    return space, learner


def space_to_doc(space: SpaceSpec, learner: LearnerConfig) -> dict:
    doc = {
        "domains": [
            {"id": d.id, "dim_names": list(d.dim_names), "weight": d.weight}
            for d in space.domains
        ],
        "sensitivity": space.sensitivity,
        "learner": {
            "theta_new": learner.theta_new,
            "eta": learner.eta,
            "r0": learner.r0,
        },
    }
    if learner.max_concepts is not None:
        doc["learner"]["max_concepts"] = learner.max_concepts
    return doc


def space_fingerprint(space: SpaceSpec) -> str:
    """Digest of the geometry (domains and sensitivity, not learner knobs)."""
    canon = {
        "domains": [
            {"id": d.id, "dim_names": list(d.dim_names), "weight": d.weight}
            for d in space.domains
        ],
        "sensitivity": space.sensitivity,
    }
    blob = json.dumps(canon, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _region_to_doc(region: Region) -> dict:
    if isinstance(region, Ball):
        return {
            "kind": "ball",
            "center": [float(v) for v in region.center],
            "radius": float(region.radius),
        }
    if isinstance(region, Box):
        return {
            "kind": "box",
            "min": [float(v) for v in region.low],
            "max": [float(v) for v in region.high],
        }
    raise StoreError(f"cannot serialize region type {type(region).__name__}")


def _region_from_doc(domain_id: str, doc: dict) -> Region:
    kind = doc.get("kind")
    if kind == "ball":
        _require_keys(doc, {"kind", "center", "radius"}, {"center", "radius"}, "ball region")
        return Ball(domain_id, np.array(doc["center"], dtype=np.float64), float(doc["radius"]))
    if kind == "box":
        _require_keys(doc, {"kind", "min", "max"}, {"min", "max"}, "box region")
        return Box(
            domain_id,
            np.array(doc["min"], dtype=np.float64),
            np.array(doc["max"], dtype=np.float64),
        )
    raise StoreError(f"unknown region kind {kind!r} in domain {domain_id!r}")


def store_to_doc(state: LearnerState, learner: LearnerConfig) -> dict:
    space_doc = space_to_doc(state.space, learner)
    return {
        "format": STORE_FORMAT,
        "space": space_doc,
        "fingerprint": space_fingerprint(state.space),
        "next_id": state.next_id,
        "concepts": [
            {
                "id": c.id,
                "label": c.label,
                "count": c.count,
                "created_at": c.created_at,
                "regions": {d: _region_to_doc(c.regions[d]) for d in sorted(c.regions)},
            }
            for c in state.concepts
        ],
    }


def store_from_doc(doc: dict) -> Tuple[LearnerState, LearnerConfig]:
    """Rebuild learner state, verifying the embedded space fingerprint."""
    try:
        _require_keys(doc, _STORE_KEYS, _STORE_KEYS - {"next_id"}, "store document")
    except ValidationError as exc:
        raise StoreError(str(exc)) from None
    if doc["format"] != STORE_FORMAT:
        raise StoreError(f"not a concept store (format {doc['format']!r})")
    space, learner = space_from_doc(doc["space"])
    want = space_fingerprint(space)
    if doc["fingerprint"] != want:
        raise StoreError(
            "space fingerprint mismatch: store was written for a different space"
            f" (stored {doc['fingerprint'][:12]}…, active {want[:12]}…)"
        )
    concepts = []
    for entry in doc["concepts"]:
        try:
            _require_keys(entry, _CONCEPT_KEYS, {"id", "regions"}, "concept entry")
        except ValidationError as exc:
            raise StoreError(str(exc)) from None
        regions = {
            domain_id: _region_from_doc(domain_id, region_doc)
            for domain_id, region_doc in entry["regions"].items()
        }
        for domain_id, region in regions.items():
            if domain_id not in space.domain_ids:
                raise StoreError(f"concept {entry['id']!r} covers unknown domain {domain_id!r}")
            want_dim = space.domain(domain_id).dim_count
            if region.centroid().shape[0] != want_dim:
                raise StoreError(
                    f"concept {entry['id']!r} region in {domain_id!r} has"
                    f" {region.centroid().shape[0]} dimensions, space declares {want_dim}"
                )
        concepts.append(
            Concept(
                id=entry["id"],
                regions=regions,
                count=int(entry.get("count", 1)),
                label=entry.get("label"),
                created_at=int(entry.get("created_at", 0)),
            )
        )
    state = LearnerState(
        space=space,
        concepts=tuple(concepts),
        next_id=int(doc.get("next_id", len(concepts) + 1)),
    )
    return state, learner


def load_json(path) -> dict:
    """Read a JSON document, reporting the parse location on failure."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise StoreError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None


def atomic_write_json(doc: dict, path) -> None:
    """Write via a same-directory temp file, fsync, then rename over the target.

    A reader (or a crash) can only ever observe the old complete file or the
    new complete file, never a prefix.
    """
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(doc, handle, indent=2, sort_keys=True)
            handle.write("\n")
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def load_config(path) -> Tuple[SpaceSpec, LearnerConfig]:
    return space_from_doc(load_json(path))


def load_store(path) -> Tuple[LearnerState, LearnerConfig]:
    return store_from_doc(load_json(path))


def save_store(state: LearnerState, learner: LearnerConfig, path) -> None:
    atomic_write_json(store_to_doc(state, learner), path)
