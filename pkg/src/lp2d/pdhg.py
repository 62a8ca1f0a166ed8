"""Chambolle-Pock primal-dual hybrid gradient in two modes.

Inequality mode iterates directly on (x, y):

    x+ = x + tau * (c - A^T y)
    y+ = max(0, y + sigma * (A (2 x+ - x) - b))

Equality mode first rewrites A x + s = b with s >= 0 and runs the same scheme
on the extended matrix [A | I], projecting only the slack block.  Fixed steps
tau = sigma = 0.9 / ||K||_2 satisfy the convergence condition
tau*sigma*||K||^2 < 1; a user-supplied step overrides both.

Progress is measured by eps_k, the max of a normalized primal residual, dual
residual, and duality gap; iterates carry eps_k as their height and stop the
run once it falls below tolerance.  Optionally a restarted Halpern scheme
anchors the iteration, re-anchoring whenever the fixed-point residual drops
below restart_factor times its value at the previous restart.

The stepping core is a single scalar-loop kernel, JIT-compiled with numba
when available (iterations are then ~100ns instead of tens of microseconds);
without numba the same function runs as plain Python.
"""
from __future__ import annotations

import math

import numpy as np

from .linalg import spectral_norm
from .model import (
    Iterate,
    Point2,
    ProblemSpec,
    SolverSettings,
    SolverTrace,
    constraint_arrays,
    objective_array,
)

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(f):
            return f

        return deco


DEFAULT_MAX_ITERATIONS = 200_000
#: safety factor inside the automatic step-size rule
STEP_SAFETY = 0.9
#: recorded-trace size cap; longer runs are strided down to about this
MAX_RECORDED = 10_000
#: iterations between cancellation/sink callbacks when those are in use
CALLBACK_CHUNK = 1024

# state-vector slots used by the stepping kernel
_SX1, _SX2, _SATY1, _SATY2, _SEPS, _SFPBASE, _SK, _SAX1, _SAX2, _SINIT = range(10)


def auto_step(k_matrix) -> float:
    """tau = sigma = 0.9 / ||K||_2 (so tau*sigma*||K||^2 = 0.81)."""
    norm = spectral_norm(np.asarray(k_matrix, dtype=np.float64))
    if norm == 0.0:
        raise ValueError("zero constraint matrix")
    return STEP_SAFETY / norm


def infer_basis(x: Point2, y, halfspaces) -> tuple[int, ...]:
    """Constraints whose dual outweighs their slack: j iff y_j > max(b_j - a_j.x, 0).

    A heuristic active-set guess used to color iterates; exact at a
    nondegenerate optimum, where slacks and duals are complementary.
    """
    out = []
    for j, h in enumerate(halfspaces):
        slack = h.b - (h.a1 * x.x1 + h.a2 * x.x2)
        if float(y[j]) > max(slack, 0.0):
            out.append(j)
    return tuple(out)


def _residual_impl(a, b, g, equality, x1, x2, y, s, b_scale, c_scale):
    """eps_k at (x, s, y); also returns A^T y for reuse by the next sweep."""
    m = a.shape[0]
    aty1 = 0.0
    aty2 = 0.0
    prim = 0.0
    by = 0.0
    ypen = 0.0
    for j in range(m):
        aty1 += a[j, 0] * y[j]
        aty2 += a[j, 1] * y[j]
        r = a[j, 0] * x1 + a[j, 1] * x2 - b[j]
        if equality:
            r += s[j]
            prim += r * r
            if y[j] < 0.0:
                ypen += y[j] * y[j]
        elif r > 0.0:
            prim += r * r
        by += b[j] * y[j]
    prim = math.sqrt(prim) / b_scale
    d1 = g[0] - aty1
    d2 = g[1] - aty2
    dual = math.sqrt(d1 * d1 + d2 * d2 + ypen) / c_scale
    cx = g[0] * x1 + g[1] * x2
    gap = abs(cx - by) / (1.0 + abs(cx) + abs(by))
    eps = prim
    if dual > eps:
        eps = dual
    if gap > eps:
        eps = gap
    return eps, aty1, aty2


def _advance_impl(
    a,
    b,
    g,
    equality,
    tau,
    sigma,
    tol,
    halpern,
    restart_factor,
    b_scale,
    c_scale,
    hist,
    st,
    y,
    s,
    an_y,
    an_s,
    wy,
    ws,
    total,
    max_total,
):
    """Advance PDHG until convergence or ``max_total`` recorded rows.

    Each history row is [x1, x2, eps, fixed_point_residual, restarted,
    y_0..y_{m-1}] plus the slack block in equality mode.  Resumable: all loop
    state lives in ``st`` and the passed arrays.
    """
    m = a.shape[0]
    if st[_SINIT] == 0.0:
        eps, aty1, aty2 = _residual(a, b, g, equality, st[_SX1], st[_SX2], y, s, b_scale, c_scale)
        st[_SATY1] = aty1
        st[_SATY2] = aty2
        st[_SEPS] = eps
        hist[0, 0] = st[_SX1]
        hist[0, 1] = st[_SX2]
        hist[0, 2] = eps
        hist[0, 3] = 0.0
        hist[0, 4] = 0.0
        for j in range(m):
            hist[0, 5 + j] = y[j]
            if equality:
                hist[0, 5 + m + j] = s[j]
        total = 1
        st[_SINIT] = 1.0

    while total - 1 < max_total:
        if st[_SEPS] <= tol:
            break
        x1 = st[_SX1]
        x2 = st[_SX2]
        tx1 = x1 + tau * (g[0] - st[_SATY1])
        tx2 = x2 + tau * (g[1] - st[_SATY2])
        e1 = 2.0 * tx1 - x1
        e2 = 2.0 * tx2 - x2
        fp = (tx1 - x1) ** 2 + (tx2 - x2) ** 2
        if equality:
            for j in range(m):
                tsj = s[j] - tau * y[j]
                if tsj < 0.0:
                    tsj = 0.0
                ws[j] = tsj
                fp += (tsj - s[j]) ** 2
            for j in range(m):
                v = a[j, 0] * e1 + a[j, 1] * e2 + (2.0 * ws[j] - s[j]) - b[j]
                tyj = y[j] + sigma * v
                wy[j] = tyj
                fp += (tyj - y[j]) ** 2
        else:
            for j in range(m):
                v = a[j, 0] * e1 + a[j, 1] * e2 - b[j]
                tyj = y[j] + sigma * v
                if tyj < 0.0:
                    tyj = 0.0
                wy[j] = tyj
                fp += (tyj - y[j]) ** 2
        fp = math.sqrt(fp)

        restarted = 0.0
        if halpern:
            if st[_SFPBASE] < 0.0:
                st[_SFPBASE] = fp
            if fp <= restart_factor * st[_SFPBASE]:
                st[_SX1] = tx1
                st[_SX2] = tx2
                st[_SAX1] = tx1
                st[_SAX2] = tx2
                for j in range(m):
                    y[j] = wy[j]
                    an_y[j] = wy[j]
                if equality:
                    for j in range(m):
                        s[j] = ws[j]
                        an_s[j] = ws[j]
                st[_SK] = 0.0
                st[_SFPBASE] = fp
                restarted = 1.0
            else:
                w = 1.0 / (st[_SK] + 2.0)
                st[_SX1] = (1.0 - w) * tx1 + w * st[_SAX1]
                st[_SX2] = (1.0 - w) * tx2 + w * st[_SAX2]
                for j in range(m):
                    y[j] = (1.0 - w) * wy[j] + w * an_y[j]
                if equality:
                    for j in range(m):
                        s[j] = (1.0 - w) * ws[j] + w * an_s[j]
                st[_SK] += 1.0
        else:
            st[_SX1] = tx1
            st[_SX2] = tx2
            for j in range(m):
                y[j] = wy[j]
            if equality:
                for j in range(m):
                    s[j] = ws[j]

        eps, aty1, aty2 = _residual(
            a, b, g, equality, st[_SX1], st[_SX2], y, s, b_scale, c_scale
        )
        st[_SATY1] = aty1
        st[_SATY2] = aty2
        st[_SEPS] = eps
        hist[total, 0] = st[_SX1]
        hist[total, 1] = st[_SX2]
        hist[total, 2] = eps
        hist[total, 3] = fp
        hist[total, 4] = restarted
        for j in range(m):
            hist[total, 5 + j] = y[j]
            if equality:
                hist[total, 5 + m + j] = s[j]
        total += 1
    return total


if _HAVE_NUMBA:
    _residual = njit(cache=True)(_residual_impl)
    _advance = njit(cache=True)(_advance_impl)
else:  # pragma: no cover
    _residual = _residual_impl
    _advance = _advance_impl


def solve_pdhg(
    spec: ProblemSpec,
    settings: SolverSettings | None = None,
    on_iterate=None,
    should_stop=None,
) -> SolverTrace:
    """Run PDHG in the configured mode until eps_k <= tolerance or the cap.

    ``on_iterate(k, x, y, eps)`` observes every iteration; ``should_stop()``
    is polled between iteration chunks for cooperative cancellation.
    """
    settings = settings or SolverSettings()
    if spec.m == 0:
        raise ValueError("problem has no constraints")
    a, b = constraint_arrays(spec)
    g = objective_array(spec)
    m = len(b)
    equality = settings.pdhg_mode == "equality"

    k_mat = np.hstack([a, np.eye(m)]) if equality else a
    step = settings.pdhg_step if settings.pdhg_step is not None else auto_step(k_mat)
    tau = sigma = float(step)
    maxit = (
        settings.max_iterations
        if settings.max_iterations is not None
        else DEFAULT_MAX_ITERATIONS
    )
    tol = settings.tolerance
    b_scale = 1.0 + float(np.linalg.norm(b))
    c_scale = 1.0 + float(np.linalg.norm(g))

    width = 5 + (2 * m if equality else m)
    hist = np.empty((maxit + 1, width))
    st = np.zeros(10)
    st[_SFPBASE] = -1.0
    y = np.zeros(m)
    s = np.zeros(m)
    an_y = np.zeros(m)
    an_s = np.zeros(m)
    wy = np.empty(m)
    ws = np.empty(m)

    args = (
        a,
        b,
        g,
        equality,
        tau,
        sigma,
        tol,
        settings.halpern,
        settings.restart_factor,
        b_scale,
        c_scale,
        hist,
        st,
        y,
        s,
        an_y,
        an_s,
        wy,
        ws,
    )
    if on_iterate is None and should_stop is None:
        total = _advance(*args, 0, maxit)
    else:
        total = 0
        while True:
            cap = min((total - 1 if total else 0) + CALLBACK_CHUNK, maxit)
            new_total = _advance(*args, total, cap)
            if on_iterate is not None:
                for i in range(max(total, 1), new_total):
                    on_iterate(i, hist[i, :2].copy(), hist[i, 5 : 5 + m].copy(), hist[i, 2])
            total = new_total
            if st[_SEPS] <= tol or total - 1 >= maxit:
                break
            if should_stop is not None and should_stop():
                break

    status = "optimal" if st[_SEPS] <= tol else "max_iterations"

    stride = max(1, math.ceil(total / MAX_RECORDED))
    keep = list(range(0, total, stride))
    if keep[-1] != total - 1:
        keep.append(total - 1)

    phase = "equality" if equality else "inequality"
    kept = hist[keep]
    slack = b[None, :] - kept[:, :2] @ a.T
    active = kept[:, 5 : 5 + m] > np.maximum(slack, 0.0)
    # the active sets repeat heavily along a trace: dedupe via bit codes
    codes = active.astype(np.int64) @ (1 << np.arange(m, dtype=np.int64))
    basis_cache: dict[int, tuple[int, ...]] = {}
    for i, code in enumerate(codes.tolist()):
        if code not in basis_cache:
            basis_cache[code] = tuple(int(j) for j in np.nonzero(active[i])[0])
    x1s, x2s = kept[:, 0].tolist(), kept[:, 1].tolist()
    epss, fps = kept[:, 2].tolist(), kept[:, 3].tolist()
    restarts = kept[:, 4].tolist()
    if equality:
        min_slacks = kept[:, 5 + m : 5 + 2 * m].min(axis=1).tolist()
        iterates = [
            Iterate(
                Point2(x1, x2),
                e,
                phase,
                basis_cache[code],
                {
                    "k": k,
                    "eps": e,
                    "fixed_point_residual": f,
                    "restarted": r != 0.0,
                    "stride": stride,
                    "min_slack": ms,
                },
            )
            for k, x1, x2, e, f, r, code, ms in zip(
                keep, x1s, x2s, epss, fps, restarts, codes.tolist(), min_slacks
            )
        ]
    else:
        iterates = [
            Iterate(
                Point2(x1, x2),
                e,
                phase,
                basis_cache[code],
                {
                    "k": k,
                    "eps": e,
                    "fixed_point_residual": f,
                    "restarted": r != 0.0,
                    "stride": stride,
                },
            )
            for k, x1, x2, e, f, r, code in zip(
                keep, x1s, x2s, epss, fps, restarts, codes.tolist()
            )
        ]

    objective_value = float(g @ st[:2]) if iterates else None
    return SolverTrace(
        algorithm="pdhg",
        settings=settings,
        status=status,
        iterates=tuple(iterates),
        objective_value=objective_value,
    )
