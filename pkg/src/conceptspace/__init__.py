"""Geometric concept engine.

Instances are points in a product of metric domains, concepts are bundles
of convex regions (one per domain), and everything downstream of that —
similarity, classification, online concept formation — is distance
arithmetic. The ingestion layer feeds the geometry from images or from
latent codes exported by external representation learners.
"""

from .concepts import (
    Classification,
    Concept,
    classify,
    concept_overlap,
    project_concept,
)
from .errors import (
    ConceptSpaceError,
    DimensionMismatchError,
    DomainMismatchError,
    LatentFormatError,
    MissingDomainError,
    NoForegroundError,
    ObservationError,
    StoreError,
    ValidationError,
)
from .geometry import (
    DomainSpec,
    Point,
    SpaceSpec,
    between,
    combined_distance,
    interpolate,
    intra_domain_distance,
    similarity,
)
from .learning import (
    Assignment,
    LearnerConfig,
    LearnerState,
    fit_stream,
    merge_overlapping,
    observe,
    observe_labeled,
)
from .regions import Ball, Box, Region, intersect_boxes, overlaps
from .store import (
    load_config,
    load_store,
    save_store,
    space_fingerprint,
    store_from_doc,
    store_to_doc,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DomainSpec",
    "SpaceSpec",
    "Point",
    "intra_domain_distance",
    "combined_distance",
    "similarity",
    "interpolate",
    "between",
    "Region",
    "Ball",
    "Box",
    "overlaps",
    "intersect_boxes",
    "Concept",
    "Classification",
    "classify",
    "project_concept",
    "concept_overlap",
    "LearnerConfig",
    "LearnerState",
    "Assignment",
    "observe",
    "observe_labeled",
    "fit_stream",
    "merge_overlapping",
    "space_fingerprint",
    "store_to_doc",
    "store_from_doc",
    "load_config",
    "load_store",
    "save_store",
    "ConceptSpaceError",
    "ValidationError",
    "MissingDomainError",
    "DimensionMismatchError",
    "DomainMismatchError",
    "NoForegroundError",
    "LatentFormatError",
    "ObservationError",
    "StoreError",
]
