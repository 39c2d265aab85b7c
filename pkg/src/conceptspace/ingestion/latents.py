"""Latent code exchange format.

External systems hand over learned representations as JSON Lines: one object
per line with an ``item_id``, a ``domain_id``, a numeric ``vector`` and an
optional ``meta`` object. This module is the only place that format is
parsed or produced, so upstream models and this engine stay decoupled.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import LatentFormatError
from ..geometry import Point, SpaceSpec, as_vector

__all__ = [
    "LatentCodeRecord",
    "load_latent_codes",
    "dump_latent_codes",
    "assemble_points",
]

_REQUIRED_KEYS = {"item_id", "domain_id", "vector"}
_ALLOWED_KEYS = _REQUIRED_KEYS | {"meta"}


@dataclass(frozen=True)
class LatentCodeRecord:
    """One latent vector for one item in one domain."""

    item_id: str
    domain_id: str
    vector: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "vector", as_vector(self.vector, "latent vector"))

    def to_json(self) -> str:
        doc = {
            "item_id": self.item_id,
            "domain_id": self.domain_id,
            "vector": [float(v) for v in self.vector],
        }
        if self.meta:
            doc["meta"] = self.meta
        return json.dumps(doc, sort_keys=True)


def _parse_line(text: str, line_no: int) -> LatentCodeRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LatentFormatError(line_no, f"invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise LatentFormatError(line_no, f"expected an object, got {type(doc).__name__}")
    missing = _REQUIRED_KEYS - doc.keys()
    if missing:
        raise LatentFormatError(line_no, f"missing keys: {', '.join(sorted(missing))}")
    unknown = doc.keys() - _ALLOWED_KEYS
    if unknown:
        raise LatentFormatError(line_no, f"unknown keys: {', '.join(sorted(unknown))}")
    if not isinstance(doc["item_id"], str) or not doc["item_id"]:
        raise LatentFormatError(line_no, "item_id must be a non-empty string")
    if not isinstance(doc["domain_id"], str) or not doc["domain_id"]:
        raise LatentFormatError(line_no, "domain_id must be a non-empty string")
    vec = doc["vector"]
    if not isinstance(vec, list) or not vec or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in vec
    ):
        raise LatentFormatError(line_no, "vector must be a non-empty array of numbers")
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise LatentFormatError(line_no, "meta must be an object")
    try:
        return LatentCodeRecord(doc["item_id"], doc["domain_id"], np.array(vec), meta)
    except ValueError as exc:
        raise LatentFormatError(line_no, str(exc)) from None


def load_latent_codes(source, space: Optional[SpaceSpec] = None) -> List[LatentCodeRecord]:
    """Parse latent code records, validating against ``space`` when given.

    Blank lines are skipped. Errors carry 1-based line numbers. With a
    space, unknown domains and wrong vector widths are rejected, as is a
    second record for the same (item_id, domain_id) pair.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()

    records = []
    seen: Dict[Tuple[str, str], int] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        rec = _parse_line(line, line_no)
        key = (rec.item_id, rec.domain_id)
        if key in seen:
            raise LatentFormatError(
                line_no,
                f"duplicate record for item {rec.item_id!r} domain {rec.domain_id!r}"
                f" (first seen on line {seen[key]})",
            )
        seen[key] = line_no
        if space is not None:
            if rec.domain_id not in space.domain_ids:
                raise LatentFormatError(line_no, f"unknown domain {rec.domain_id!r}")
            want = space.domain(rec.domain_id).dim_count
            if rec.vector.shape[0] != want:
                raise LatentFormatError(
                    line_no,
                    f"domain {rec.domain_id!r} expects {want} dimensions,"
                    f" got {rec.vector.shape[0]}",
                )
        records.append(rec)
    return records


def dump_latent_codes(records, sink) -> None:
    """Write records as JSON Lines to a path or text file object."""
    text = "".join(rec.to_json() + "\n" for rec in records)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text)


def assemble_points(records, required_domains):
    """Join per-domain records into full points by item id.

    Returns ``(points, missing)``: points is a list of ``(item_id, Point)``
    sorted by item id, one entry per item that covers every id in
    ``required_domains``; missing maps each incomplete item to the sorted
    list of absent domain ids. The join does not depend on record order.
    """
    required = set(required_domains)
    by_item: Dict[str, Dict[str, np.ndarray]] = {}
    for rec in records:
        by_item.setdefault(rec.item_id, {})[rec.domain_id] = rec.vector
    points = []
    missing: Dict[str, List[str]] = {}
    for item_id in sorted(by_item):
        coords = by_item[item_id]
        absent = sorted(required - coords.keys())
        if absent:
            missing[item_id] = absent
        else:
            points.append((item_id, Point(coords)))
    return points, missing
