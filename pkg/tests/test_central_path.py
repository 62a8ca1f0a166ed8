import math

import numpy as np
import pytest

from lp2d.central_path import (
    BarrierSubproblem,
    mu_schedule,
    newton_solve,
    solve_central_path,
    strictly_feasible_start,
)
from lp2d.model import Point2, ProblemSpec, SolverSettings, constraint_arrays, objective_array

import oracles
from conftest import random_closed_spec, spec_from_vertices


class TestMuSchedule:
    def test_two_point_schedule_is_exactly_the_endpoints(self):
        assert list(mu_schedule(2)) == [1e3, 1e-5]

    def test_log_spacing(self):
        s = mu_schedule(5)
        ratios = s[1:] / s[:-1]
        assert np.allclose(ratios, ratios[0], rtol=1e-12)

    def test_default_count(self):
        s = mu_schedule(30)
        assert len(s) == 30
        assert s[0] == 1e3 and s[-1] == 1e-5
        assert (np.diff(s) < 0).all()

    def test_too_short(self):
        with pytest.raises(ValueError):
            mu_schedule(1)


class TestFeasibleStart:
    def test_unit_square_centroid(self, unit_square):
        assert strictly_feasible_start(unit_square) == Point2(0.5, 0.5)

    def test_triangle_centroid_slacks(self, triangle_660):
        start = strictly_feasible_start(triangle_660)
        assert start == Point2(2.0, 2.0)
        a, b = constraint_arrays(triangle_660)
        slacks = b - a @ np.array(start)
        assert slacks.min() >= 2.0 / math.sqrt(2) - 1e-12

    def test_open_halfplane_pushes_inward(self):
        from lp2d.geometry import RegionBuilder, open_region, try_add_vertex

        builder = RegionBuilder()
        try_add_vertex(builder, Point2(0, 0))
        try_add_vertex(builder, Point2(1, 0))
        spec = open_region(builder, objective=(0.0, 1.0))
        start = strictly_feasible_start(spec)
        assert start.x2 > 0

    def test_hrep_only_problem_gets_interior_start(self, unit_square):
        import numpy as np
        from lp2d.model import ProblemSpec

        spec = ProblemSpec(unit_square.objective, (), True, unit_square.halfspaces)
        start = strictly_feasible_start(spec)
        a, b = constraint_arrays(spec)
        assert (b - a @ np.array(start)).min() >= 1e-6 - 1e-15
        trace = solve_central_path(spec)
        assert trace.status == "optimal"
        assert trace.objective_value == pytest.approx(2.0, abs=1e-3)

    def test_hrep_only_empty_region_raises(self):
        from lp2d.model import Halfspace, ProblemSpec

        bad = ProblemSpec((1.0, 0.0), (), True, (Halfspace(1, 0, -1), Halfspace(-1, 0, 0)))
        with pytest.raises(ValueError, match="empty interior"):
            strictly_feasible_start(bad)


class TestNewton:
    def test_analytic_center_of_square(self, unit_square):
        spec = ProblemSpec((0.0, 0.0), unit_square.vertices, True, unit_square.halfspaces)
        for mu in (10.0, 1.0, 1e-3):
            res = newton_solve(BarrierSubproblem(mu, spec, Point2(0.25, 0.8)))
            assert res.point.x1 == pytest.approx(0.5, abs=1e-8)
            assert res.point.x2 == pytest.approx(0.5, abs=1e-8)

    def test_small_mu_lands_near_optimal_vertex(self, unit_square):
        res = newton_solve(BarrierSubproblem(1e-5, unit_square, Point2(0.5, 0.5)))
        assert abs(res.point.x1 - 1.0) < 1e-3 and abs(res.point.x2 - 1.0) < 1e-3

    def test_gradient_matches_finite_differences(self, rng):
        spec = random_closed_spec(rng)
        a, b = constraint_arrays(spec)
        c = objective_array(spec)
        mu = 0.37
        h = 1e-6
        checked = 0
        while checked < 100:
            p = rng.uniform(-10, 10, size=2)
            s = b - a @ p
            if s.min() < 1e-2:
                continue
            grad = c - mu * (a / s[:, None]).sum(axis=0)

            def f(q):
                return float(c @ q) + mu * float(np.log(b - a @ q).sum())

            fd = np.array(
                [
                    (f(p + [h, 0]) - f(p - [h, 0])) / (2 * h),
                    (f(p + [0, h]) - f(p - [0, h])) / (2 * h),
                ]
            )
            assert np.allclose(grad, fd, rtol=1e-5, atol=1e-5 * max(1.0, np.abs(grad).max()))
            checked += 1

    def test_hessian_is_negative_semidefinite(self, rng):
        # v^T hess v <= 0 for the barrier part; we form the negated matrix
        spec = random_closed_spec(rng)
        a, b = constraint_arrays(spec)
        for _ in range(50):
            p = rng.uniform(-10, 10, size=2)
            s = b - a @ p
            if s.min() < 1e-3:
                continue
            neg_hess = (a.T @ (a / (s * s)[:, None]))  # mu factored out, mu > 0
            v = rng.standard_normal(2)
            assert v @ neg_hess @ v >= -1e-12

    def test_infeasible_start_rejected(self, unit_square):
        with pytest.raises(ValueError, match="strictly feasible"):
            newton_solve(BarrierSubproblem(1.0, unit_square, Point2(2.0, 0.5)))


class TestSolveCentralPath:
    def test_square_path_approaches_opt(self, unit_square):
        trace = solve_central_path(unit_square)
        assert trace.status == "optimal"
        assert len(trace.iterates) == 30
        target = np.array([1.0, 1.0])
        dists = [np.linalg.norm(np.array(it.point) - target) for it in trace.iterates]
        for prev, nxt in zip(dists[-10:], dists[-9:]):
            assert nxt <= prev + 1e-12

    def test_heights_follow_schedule(self, unit_square):
        trace = solve_central_path(unit_square)
        assert np.allclose([it.z for it in trace.iterates], mu_schedule(30))

    def test_zero_objective_constant_path(self, unit_square):
        spec = ProblemSpec((0.0, 0.0), unit_square.vertices, True, unit_square.halfspaces)
        trace = solve_central_path(spec)
        points = {(round(it.point.x1, 10), round(it.point.x2, 10)) for it in trace.iterates}
        assert points == {(0.5, 0.5)}

    def test_every_iterate_strictly_feasible(self, rng):
        for _ in range(10):
            spec = random_closed_spec(rng)
            a, b = constraint_arrays(spec)
            trace = solve_central_path(spec)
            assert trace.status == "optimal"
            for it in trace.iterates:
                assert (b - a @ np.array(it.point)).min() > 0

    def test_matches_vertex_oracle(self, rng):
        for _ in range(20):
            spec = random_closed_spec(rng)
            trace = solve_central_path(spec)
            best = oracles.best_vertex_value(
                [(v.x1, v.x2) for v in spec.vertices], spec.objective
            )
            assert trace.objective_value == pytest.approx(best, abs=1e-3)

    def test_unbounded_direction_truncates(self):
        # first quadrant with objective along a recession direction whose
        # barrier grows without bound
        from lp2d.geometry import RegionBuilder, open_region, try_add_vertex

        builder = RegionBuilder()
        try_add_vertex(builder, Point2(0, 1))
        try_add_vertex(builder, Point2(0, 0))
        try_add_vertex(builder, Point2(1, 0))
        spec = open_region(builder, objective=(1.0, 1.0))
        trace = solve_central_path(spec)
        assert trace.status == "max_iterations"
        assert len(trace.iterates) < 30

    def test_custom_mu_count(self, unit_square):
        trace = solve_central_path(unit_square, SolverSettings(mu_count=7))
        assert len(trace.iterates) == 7

    def test_meta_contract(self, unit_square):
        trace = solve_central_path(unit_square)
        for it in trace.iterates:
            assert set(it.meta) == {"mu", "newton_iters", "grad_norm"}
