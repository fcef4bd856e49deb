# conftest.py

from __future__ import annotations

import numpy as np
import pytest

from domain.instances import default_anchors, lift_to_moo, make_random_quadratic
from domain.models import MooLiftedInstance


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def convex_instance(rng: np.random.Generator) -> MooLiftedInstance:
    """Quadratique aléatoire convexe (L = 1) relevée à 3 objectifs."""
    g = make_random_quadratic(1.0, 0.0, 12, 1.0, rng)
    return lift_to_moo(g, default_anchors(3, 1.0, rng), strongly_convex=False)


@pytest.fixture
def strong_instance(rng: np.random.Generator) -> MooLiftedInstance:
    """Quadratique aléatoire fortement convexe (μ = 0.25, L = 1) relevée à 2 objectifs."""
    g = make_random_quadratic(1.0, 0.25, 12, 1.0, rng)
    return lift_to_moo(g, default_anchors(2, 1.0, rng), strongly_convex=True)
