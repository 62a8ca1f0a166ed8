import numpy as np
import pytest

from lp2d.model import Point2, ProblemSpec
from lp2d import geometry

import oracles


def spec_from_vertices(vertices, objective) -> ProblemSpec:
    pts = tuple(Point2(float(v[0]), float(v[1])) for v in vertices)
    return ProblemSpec(objective, pts, True, tuple(geometry.halfspaces_of(pts, True)))


def random_closed_spec(rng, objective=None, n_min=5, n_max=12, box=10.0) -> ProblemSpec:
    verts = oracles.random_convex_vertices(rng, n_min=n_min, n_max=n_max, box=box)
    if objective is None:
        objective = oracles.random_unit_objective(rng)
    return spec_from_vertices(verts, objective)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def unit_square() -> ProblemSpec:
    return spec_from_vertices([(0, 0), (1, 0), (1, 1), (0, 1)], (1.0, 1.0))


@pytest.fixture
def triangle_660() -> ProblemSpec:
    return spec_from_vertices([(0, 0), (6, 0), (0, 6)], (1.0, 1.0))
