"""Primal central path traced via log-barrier subproblems.

For each mu on a log-spaced schedule from 1e3 down to 1e-5, maximize

    f_mu(x) = c.x + mu * sum_i log(b_i - a_i.x)

by damped Newton ascent with Armijo backtracking, warm-starting each
subproblem from the previous maximizer.  The resulting points trace the
central path from the analytic center toward the LP optimum; iterates carry
mu as their height.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import lu_factor, lu_solve
from .model import (
    Halfspace,
    Iterate,
    Point2,
    ProblemSpec,
    SolverSettings,
    SolverTrace,
    constraint_arrays,
    objective_array,
)

MU_HIGH = 1e3
MU_LOW = 1e-5
ARMIJO_SLOPE = 1e-4
BACKTRACK_FACTOR = 0.5
NEWTON_TOL = 1e-8
NEWTON_CAP = 50
MAX_BACKTRACKS = 60
DIVERGENCE_LIMIT = 1e6
MIN_START_SLACK = 1e-6
HESSIAN_RIDGE = 1e-12


class BarrierUnboundedError(RuntimeError):
    """The barrier maximizer ran away (objective unbounded over the region)."""


@dataclass(frozen=True)
class BarrierSubproblem:
    mu: float
    spec: ProblemSpec
    x_start: Point2


class NewtonResult(NamedTuple):
    point: Point2
    iterations: int
    grad_norm: float


def mu_schedule(count: int) -> np.ndarray:
    """Geometric schedule of ``count`` values from 1e3 down to 1e-5."""
    if count < 2:
        raise ValueError("mu schedule needs at least 2 values")
    return np.geomspace(MU_HIGH, MU_LOW, count)


def _min_slack(a: np.ndarray, b: np.ndarray, x: np.ndarray) -> float:
    return float((b - a @ x).min())


def strictly_feasible_start(spec: ProblemSpec) -> Point2:
    """A point with every slack >= 1e-6.

    Closed regions use the vertex centroid directly; open regions push the
    centroid along the average inward normal, doubling the step until the
    slack bound holds.  H-rep-only problems (no vertices) fall back to a
    phase-1 solve of the margin-shrunk constraints.
    """
    if spec.m == 0:
        raise ValueError("problem has no constraints")
    a, b = constraint_arrays(spec)
    if not spec.vertices:
        return _feasible_start_from_halfspaces(spec)
    centroid = np.mean([[v.x1, v.x2] for v in spec.vertices], axis=0)
    if _min_slack(a, b, centroid) >= MIN_START_SLACK:
        return Point2(float(centroid[0]), float(centroid[1]))
    inward = -a.mean(axis=0)
    norm = float(np.linalg.norm(inward))
    if norm == 0.0:
        raise ValueError("empty interior")
    inward /= norm
    step = 1.0
    for _ in range(60):
        x = centroid + step * inward
        if _min_slack(a, b, x) >= MIN_START_SLACK:
            return Point2(float(x[0]), float(x[1]))
        step *= 2.0
    raise ValueError("empty interior")


def _feasible_start_from_halfspaces(spec: ProblemSpec) -> Point2:
    """Any point of {x : A x <= b - margin}: its slacks all clear the margin.

    A basic feasible point of the shrunk system is found with the simplex
    phase-1 machinery (deterministic, reuses the existing kernels).
    """
    from .simplex import original_point, phase1, to_standard_form
    from .linalg import lu_factor, lu_solve

    shrunk = ProblemSpec(
        spec.objective,
        (),
        spec.closed,
        tuple(Halfspace(h.a1, h.a2, h.b - MIN_START_SLACK) for h in spec.halfspaces),
    )
    feasible = phase1(to_standard_form(shrunk))
    if feasible is None:
        raise ValueError("empty interior")
    std, basis = feasible
    z = np.zeros(std.n)
    z[basis] = lu_solve(lu_factor(std.a[:, basis]), std.b)
    return original_point(z)


def newton_solve(sub: BarrierSubproblem, tol: float = NEWTON_TOL) -> NewtonResult:
    """Maximize f_mu from sub.x_start; at most NEWTON_CAP damped steps."""
    a, b = constraint_arrays(sub.spec)
    c = objective_array(sub.spec)
    mu = sub.mu
    x = np.array([sub.x_start.x1, sub.x_start.x2])
    s = b - a @ x
    if s.min() <= 0.0:
        raise ValueError("start point is not strictly feasible")

    grad = c - mu * (a / s[:, None]).sum(axis=0)
    grad_norm = float(np.abs(grad).max())
    iterations = 0
    for _ in range(NEWTON_CAP):
        if grad_norm <= tol:
            break
        # solve (mu * sum a a^T / s^2) d = grad; the matrix is -hessian
        h = mu * (a.T @ (a / (s * s)[:, None]))
        try:
            d = lu_solve(lu_factor(h), grad)
        except np.linalg.LinAlgError:
            h[np.diag_indices_from(h)] += HESSIAN_RIDGE
            d = lu_solve(lu_factor(h), grad)

        f_x = float(c @ x) + mu * float(np.log(s).sum())
        slope = float(grad @ d)
        alpha = 1.0
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            x_c = x + alpha * d
            s_c = b - a @ x_c
            if s_c.min() > 0.0:  # feasibility before any log evaluation
                f_c = float(c @ x_c) + mu * float(np.log(s_c).sum())
                if f_c >= f_x + ARMIJO_SLOPE * alpha * slope:
                    accepted = True
                    break
            alpha *= BACKTRACK_FACTOR
        if not accepted:
            break  # step underflow: return the best point found
        x, s = x_c, s_c
        iterations += 1
        if float(np.abs(x).max()) > DIVERGENCE_LIMIT:
            raise BarrierUnboundedError("barrier unbounded")
        grad = c - mu * (a / s[:, None]).sum(axis=0)
        grad_norm = float(np.abs(grad).max())
    return NewtonResult(Point2(float(x[0]), float(x[1])), iterations, grad_norm)


def solve_central_path(
    spec: ProblemSpec,
    settings: SolverSettings | None = None,
    on_iterate=None,
    should_stop=None,
) -> SolverTrace:
    """One iterate per scheduled mu, warm-started along the path."""
    settings = settings or SolverSettings()
    c = objective_array(spec)
    x = strictly_feasible_start(spec)
    iterates: list[Iterate] = []
    status = "optimal"
    for mu in mu_schedule(settings.mu_count):
        if should_stop is not None and should_stop():
            status = "max_iterations"
            break
        try:
            res = newton_solve(BarrierSubproblem(float(mu), spec, x), tol=NEWTON_TOL)
        except (BarrierUnboundedError, np.linalg.LinAlgError):
            status = "max_iterations"
            break
        x = res.point
        it = Iterate(
            point=x,
            z=float(mu),
            phase=f"mu={mu:.6g}",
            meta={"mu": float(mu), "newton_iters": res.iterations, "grad_norm": res.grad_norm},
        )
        iterates.append(it)
        if on_iterate is not None:
            on_iterate(it)
    objective_value = (
        float(c @ np.array([x.x1, x.x2])) if status == "optimal" and iterates else None
    )
    if status == "optimal" and not iterates:
        status = "max_iterations"
    return SolverTrace(
        algorithm="central_path",
        settings=settings,
        status=status,
        iterates=tuple(iterates),
        objective_value=objective_value,
    )
