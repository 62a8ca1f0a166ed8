"""Two-phase revised simplex on the difference-of-positives + slack form.

The inequality problem max c.x s.t. A x <= b is rewritten with x = x+ - x-
(x+, x- >= 0) and one slack per row, giving equality constraints over
nonnegative variables.  Phase I finds a feasible basis with artificials;
Phase II pivots with the first-positive-reduced-cost entering rule and
Bland's rule on ratio-test ties, re-factorizing the basis each pivot.

Because of the sign split, pivots can land on points that are not vertices of
the original region; they show up where the region's edges cross the
coordinate axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import lu_factor, lu_solve, lu_solve_transposed
from .model import (
    Iterate,
    Point2,
    ProblemSpec,
    SolverSettings,
    SolverTrace,
    constraint_arrays,
)

#: columns 0..3 are x1+, x1-, x2+, x2-; column 4+j is the slack of row j
N_STRUCTURAL = 4

REDUCED_COST_TOL = 1e-9
RATIO_TOL = 1e-9
DEFAULT_MAX_PIVOTS = 10_000


@dataclass(frozen=True)
class StandardLP:
    """Equality-form data: a is m x (4+m), columns as described above."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]


def to_standard_form(spec: ProblemSpec) -> StandardLP:
    """Build [a | -a | I] with costs (c1, -c1, c2, -c2, 0...)."""
    if spec.m == 0:
        raise ValueError("problem has no constraints")
    a, b = constraint_arrays(spec)
    m = len(b)
    a_std = np.zeros((m, N_STRUCTURAL + m))
    a_std[:, 0] = a[:, 0]
    a_std[:, 1] = -a[:, 0]
    a_std[:, 2] = a[:, 1]
    a_std[:, 3] = -a[:, 1]
    a_std[:, N_STRUCTURAL:] = np.eye(m)
    c1, c2 = spec.objective
    c_std = np.zeros(N_STRUCTURAL + m)
    c_std[:N_STRUCTURAL] = (c1, -c1, c2, -c2)
    return StandardLP(a_std, b.copy(), c_std)


def original_point(z: np.ndarray) -> Point2:
    """Map a standard-form point back to the drawing plane."""
    return Point2(float(z[0] - z[1]), float(z[2] - z[3]))


def _pivot_loop(a, b, c, basis, max_pivots, record=None):
    """Shared pivoting core (maximization).

    ``basis`` is row-aligned: column basis[i] is basic in row i.  Returns
    (status, basis, z, ray) where z is the full variable vector at the last
    basic solution and ray is the unbounded direction in standard space (or
    None).  ``record`` observes every basic feasible solution, including the
    starting one.
    """
    m, n = a.shape
    basis = np.asarray(basis, dtype=int).copy()
    in_basis = np.zeros(n, dtype=bool)
    in_basis[basis] = True
    seen = set()

    for pivots in range(max_pivots + 1):
        key = tuple(sorted(basis))
        assert key not in seen, "basis repeated: Bland's rule should prevent cycling"
        seen.add(key)

        f = lu_factor(a[:, basis])
        xb = lu_solve(f, b)
        z = np.zeros(n)
        z[basis] = xb
        if record is not None:
            record(z, basis, pivots)

        y = lu_solve_transposed(f, c[basis])
        reduced = c - a.T @ y
        enter = -1
        for j in range(n):
            if not in_basis[j] and reduced[j] > REDUCED_COST_TOL:
                enter = j
                break
        if enter < 0:
            return "optimal", basis, z, None
        if pivots == max_pivots:
            return "max_iterations", basis, z, None

        d = lu_solve(f, a[:, enter])
        pos = d > RATIO_TOL
        if not pos.any():
            ray = np.zeros(n)
            ray[enter] = 1.0
            ray[basis] = -d
            return "unbounded", basis, z, ray
        ratios = np.where(pos, xb / np.where(pos, d, 1.0), np.inf)
        theta = ratios.min()
        tied = [i for i in range(m) if pos[i] and ratios[i] <= theta + RATIO_TOL]
        leave = min(tied, key=lambda i: basis[i])
        in_basis[basis[leave]] = False
        in_basis[enter] = True
        basis[leave] = enter

    raise AssertionError("unreachable")


def phase1(std: StandardLP):
    """Find a feasible basis; returns (possibly row-reduced std, basis) or None.

    Rows with negative rhs are sign-flipped, one artificial per row (cost -1,
    maximizing) starts basic, and leftover zero-level artificials are pivoted
    out or their redundant rows dropped.
    """
    a = std.a.copy()
    b = std.b.copy()
    m, n = a.shape
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0

    ext = np.hstack([a, np.eye(m)])
    c_ext = np.zeros(n + m)
    c_ext[n:] = -1.0
    status, basis, z, _ = _pivot_loop(ext, b, c_ext, np.arange(n, n + m), DEFAULT_MAX_PIVOTS)
    if status != "optimal":
        raise RuntimeError(f"phase 1 did not converge: {status}")
    if c_ext @ z < -1e-7:
        return None

    drop = []
    for i in range(m):
        if basis[i] < n:
            continue
        f = lu_factor(ext[:, basis])
        for j in range(n):
            if j in basis:
                continue
            d = lu_solve(f, ext[:, j])
            if abs(d[i]) > RATIO_TOL:
                basis[i] = j
                break
        else:
            drop.append(i)  # row is redundant: no real column can replace it
    if drop:
        keep = np.array([i for i in range(m) if i not in drop])
        a = a[keep]
        b = b[keep]
        basis = basis[keep]
    return StandardLP(a, b, std.c.copy()), basis


def _active_constraints(spec: ProblemSpec, p: Point2, tol: float = 1e-9):
    return tuple(j for j, h in enumerate(spec.halfspaces) if abs(h.value(p)) <= tol)


def phase2(
    spec: ProblemSpec,
    std: StandardLP,
    basis,
    settings: SolverSettings | None = None,
    on_iterate=None,
) -> SolverTrace:
    """Run the pivoting core from a feasible basis, emitting mapped iterates."""
    settings = settings or SolverSettings()
    max_pivots = settings.max_iterations if settings.max_iterations is not None else DEFAULT_MAX_PIVOTS
    iterates: list[Iterate] = []

    def record(z, bas, pivots):
        p = original_point(z)
        it = Iterate(
            point=p,
            z=0.0,
            phase="phase2",
            basis=_active_constraints(spec, p),
            meta={"pivot": pivots},
        )
        iterates.append(it)
        if on_iterate is not None:
            on_iterate(it)

    status, basis, z, ray_std = _pivot_loop(std.a, std.b, std.c, basis, max_pivots, record)

    objective_value = None
    ray = None
    if status == "optimal":
        objective_value = float(std.c @ z)
    elif status == "unbounded":
        d = np.array([ray_std[0] - ray_std[1], ray_std[2] - ray_std[3]])
        norm = np.linalg.norm(d)
        if norm > 0:
            d /= norm
        ray = (float(d[0]), float(d[1]))
    return SolverTrace(
        algorithm="simplex",
        settings=settings,
        status=status,
        iterates=tuple(iterates),
        objective_value=objective_value,
        ray=ray,
    )


def solve_simplex(
    spec: ProblemSpec,
    settings: SolverSettings | None = None,
    on_iterate=None,
) -> SolverTrace:
    """Two-phase solve; only Phase II basic solutions appear in the trace."""
    settings = settings or SolverSettings()
    std = to_standard_form(spec)
    feasible = phase1(std)
    if feasible is None:
        return SolverTrace(
            algorithm="simplex",
            settings=settings,
            status="infeasible",
            iterates=(),
        )
    std_reduced, basis = feasible
    return phase2(spec, std_reduced, basis, settings, on_iterate)
