"""Infeasible primal-dual predictor-corrector interior-point method.

Works on the inequality form max c.x s.t. A x <= b with slacks s = b - A x
and duals y, both kept strictly positive.  Each iteration LU-factors the full
(2 + 2m) KKT linearization once and solves it against up to two right-hand
sides: the affine (predictor) direction, and a Mehrotra-corrected direction
that is skipped when the affine step is already long enough.
"""
from __future__ import annotations

import numpy as np

from .linalg import lu_factor, lu_solve
from .model import (
    Iterate,
    Point2,
    ProblemSpec,
    SolverSettings,
    SolverTrace,
    constraint_arrays,
    objective_array,
)

DEFAULT_MAX_ITERATIONS = 200
#: fraction-to-boundary factor inside the step rule
BOUNDARY_FRACTION = 0.995
#: static Tikhonov shift applied to the KKT diagonal
KKT_REGULARIZATION = 1e-10


def initial_state(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The fixed cold start: x = 0, s = 1, y = 1 (so mu starts at exactly 1)."""
    return np.zeros(2), np.ones(m), np.ones(m)


def _max_step(v: np.ndarray, dv: np.ndarray) -> float:
    """Largest t with v + t*dv >= 0 (inf when dv never decreases v)."""
    neg = dv < 0
    if not neg.any():
        return np.inf
    return float(np.min(-v[neg] / dv[neg]))


def _assemble_kkt(a: np.ndarray, s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Jacobian of {A x + s - b, A^T y - c, S Y 1} wrt (dx, ds, dy)."""
    m = a.shape[0]
    k = np.zeros((2 + 2 * m, 2 + 2 * m))
    k[:m, :2] = a
    k[:m, 2 : 2 + m] = np.eye(m)
    k[m : m + 2, 2 + m :] = a.T
    rows = np.arange(m)
    k[m + 2 + rows, 2 + rows] = y
    k[m + 2 + rows, 2 + m + rows] = s
    k[np.diag_indices_from(k)] += KKT_REGULARIZATION
    return k


def solve_ipm(
    spec: ProblemSpec,
    settings: SolverSettings | None = None,
    on_iterate=None,
    should_stop=None,
) -> SolverTrace:
    """Predictor-corrector solve; iterate heights carry mu = (s.y)/m."""
    settings = settings or SolverSettings()
    if spec.m == 0:
        raise ValueError("problem has no constraints")
    a, b = constraint_arrays(spec)
    c = objective_array(spec)
    m = len(b)
    maxit = (
        settings.max_iterations if settings.max_iterations is not None else DEFAULT_MAX_ITERATIONS
    )
    tol = settings.tolerance
    b_scale = 1.0 + float(np.abs(b).max())
    c_scale = 1.0 + float(np.abs(c).max())

    x, s, y = initial_state(m)
    iterates: list[Iterate] = []

    def record(phase: str, alpha_p: float, alpha_d: float, corrector_used: bool):
        mu = float(s @ y) / m
        it = Iterate(
            point=Point2(float(x[0]), float(x[1])),
            z=mu,
            phase=phase,
            meta={
                "mu": mu,
                "alpha_p": alpha_p,
                "alpha_d": alpha_d,
                "corrector_used": corrector_used,
                "r_p": float(np.abs(b - a @ x - s).max()) / b_scale,
                "r_d": float(np.abs(c - a.T @ y).max()) / c_scale,
                "max_comp": float((s * y).max()),
                "min_s": float(s.min()),
                "min_y": float(y.min()),
            },
        )
        iterates.append(it)
        if on_iterate is not None:
            on_iterate(it)

    record("init", 0.0, 0.0, False)
    status = "max_iterations"
    for _ in range(maxit):
        if should_stop is not None and should_stop():
            break
        r_p = b - a @ x - s
        r_d = c - a.T @ y
        mu = float(s @ y) / m
        if max(float(np.abs(r_p).max()) / b_scale, float(np.abs(r_d).max()) / c_scale, mu) <= tol:
            status = "optimal"
            break

        try:
            f = lu_factor(_assemble_kkt(a, s, y))
        except np.linalg.LinAlgError as err:
            raise np.linalg.LinAlgError("ill-conditioned") from err

        rhs = np.concatenate([r_p, r_d, -s * y])
        d_aff = lu_solve(f, rhs)
        dx_a, ds_a, dy_a = d_aff[:2], d_aff[2 : 2 + m], d_aff[2 + m :]
        ap_aff = min(1.0, BOUNDARY_FRACTION * _max_step(s, ds_a))
        ad_aff = min(1.0, BOUNDARY_FRACTION * _max_step(y, dy_a))

        # skip the second solve when the affine step is already long; strict
        # comparison makes threshold 1 mean "always correct" and 0 "never"
        corrector_used = not min(ap_aff, ad_aff) > settings.corrector_threshold
        if corrector_used:
            mu_aff = float((s + ap_aff * ds_a) @ (y + ad_aff * dy_a)) / m
            sigma = (mu_aff / mu) ** 3
            rhs[2 + m :] = sigma * mu - s * y - ds_a * dy_a
            d = lu_solve(f, rhs)
            dx, ds, dy = d[:2], d[2 : 2 + m], d[2 + m :]
        else:
            dx, ds, dy = dx_a, ds_a, dy_a

        alpha_p = settings.alpha_max * min(1.0, BOUNDARY_FRACTION * _max_step(s, ds))
        alpha_d = settings.alpha_max * min(1.0, BOUNDARY_FRACTION * _max_step(y, dy))
        x_new = x + alpha_p * dx
        s_new = s + alpha_p * ds
        y_new = y + alpha_d * dy
        if not (
            np.isfinite(x_new).all()
            and np.isfinite(s_new).all()
            and np.isfinite(y_new).all()
            and s_new.min() > 0
            and y_new.min() > 0
        ):
            break  # diverging (typically an unbounded problem); keep the trace
        x, s, y = x_new, s_new, y_new
        record("corrector" if corrector_used else "predictor", alpha_p, alpha_d, corrector_used)

    objective_value = float(c @ x) if status == "optimal" else None
    return SolverTrace(
        algorithm="ipm",
        settings=settings,
        status=status,
        iterates=tuple(iterates),
        objective_value=objective_value,
    )
