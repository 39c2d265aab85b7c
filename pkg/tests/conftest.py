"""Shared fixtures: small spaces and deterministic point generators."""

import numpy as np
import pytest

from conceptspace import DomainSpec, Point, SpaceSpec


@pytest.fixture
def space1():
    """Single 2-dimensional domain, unit weight and sensitivity."""
    return SpaceSpec(domains=(DomainSpec("pos", ("x", "y")),))


@pytest.fixture
def space2():
    """Two domains of different widths, unit weights."""
    return SpaceSpec(
        domains=(
            DomainSpec("color", ("hue", "saturation", "brightness")),
            DomainSpec("shape", ("x", "y")),
        )
    )


@pytest.fixture
def weighted_space():
    """Two 1-dimensional domains with weights 2 and 0.5."""
    return SpaceSpec(
        domains=(
            DomainSpec("a", ("u",), weight=2.0),
            DomainSpec("b", ("v",), weight=0.5),
        )
    )


def random_point(rng: np.random.Generator, space: SpaceSpec, scale: float = 1.0) -> Point:
    return Point(
        {d.id: rng.uniform(-scale, scale, size=d.dim_count) for d in space.domains}
    )
