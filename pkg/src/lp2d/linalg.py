"""Dense kernels shared by all solvers: LU with partial pivoting, triangular
solves, matrix-vector products, and a power-iteration spectral-norm estimate.

Matrices are 2-D C-contiguous float64 arrays (row-major buffers); vectors are
1-D float64 arrays.  Every kernel accepts an optional pre-allocated output
buffer so hot loops can avoid reallocation; results are identical either way.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative pivot threshold below which a matrix is declared singular.
SINGULAR_RTOL = 1e-14


@dataclass
class LuFactors:
    """Packed LU factors of a row permutation of A.

    ``lu`` holds L strictly below the diagonal (unit diagonal implied) and U
    on and above it; ``perm`` maps factored rows to original rows, so that
    L @ U == A[perm].  ``sign`` is the permutation parity.
    """

    lu: np.ndarray
    perm: np.ndarray
    sign: int

    @property
    def n(self) -> int:
        return self.lu.shape[0]


def _as_matrix(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    return a


def lu_factor(a, out: np.ndarray | None = None) -> LuFactors:
    """Factor a square matrix as P*A = L*U with partial (row) pivoting.

    Raises np.linalg.LinAlgError("singular matrix") when a pivot falls below
    SINGULAR_RTOL relative to its row's largest original entry.
    """
    a = _as_matrix(a)
    n, m = a.shape
    if n != m:
        raise ValueError(f"matrix must be square, got {n}x{m}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")

    if out is None:
        lu = a.copy()
    else:
        if out.shape != a.shape:
            raise ValueError("workspace shape mismatch")
        np.copyto(out, a)
        lu = out
    perm = np.arange(n)
    sign = 1
    # per-row scale of the original matrix, permuted alongside the rows
    scale = np.abs(a).max(axis=1) if n > 0 else np.empty(0)

    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            scale[[k, p]] = scale[[p, k]]
            sign = -sign
        piv = lu[k, k]
        if abs(piv) <= SINGULAR_RTOL * scale[k] or scale[k] == 0.0:
            raise np.linalg.LinAlgError("singular matrix")
        if k + 1 < n:
            lu[k + 1 :, k] /= piv
            lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return LuFactors(lu=lu, perm=perm, sign=sign)


def lu_solve(f: LuFactors, rhs, out: np.ndarray | None = None) -> np.ndarray:
    """Solve A @ x = rhs given LuFactors of A."""
    rhs = np.asarray(rhs, dtype=np.float64)
    n = f.n
    if rhs.shape != (n,):
        raise ValueError(f"rhs must have length {n}, got shape {rhs.shape}")
    x = out if out is not None else np.empty(n)
    if x.shape != (n,):
        raise ValueError("workspace shape mismatch")
    np.copyto(x, rhs[f.perm])
    lu = f.lu
    for i in range(1, n):
        x[i] -= np.dot(lu[i, :i], x[:i])
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            x[i] -= np.dot(lu[i, i + 1 :], x[i + 1 :])
        x[i] /= lu[i, i]
    return x


def lu_solve_transposed(f: LuFactors, rhs, out: np.ndarray | None = None) -> np.ndarray:
    """Solve A.T @ y = rhs given LuFactors of A (same factorization reused)."""
    rhs = np.asarray(rhs, dtype=np.float64)
    n = f.n
    if rhs.shape != (n,):
        raise ValueError(f"rhs must have length {n}, got shape {rhs.shape}")
    lu = f.lu
    w = rhs.copy()
    # U.T is lower triangular with the non-unit diagonal
    for i in range(n):
        if i > 0:
            w[i] -= np.dot(lu[:i, i], w[:i])
        w[i] /= lu[i, i]
    # L.T is upper triangular with unit diagonal
    for i in range(n - 1, -1, -1):
        if i + 1 < n:
            w[i] -= np.dot(lu[i + 1 :, i], w[i + 1 :])
    y = out if out is not None else np.empty(n)
    if y.shape != (n,):
        raise ValueError("workspace shape mismatch")
    y[f.perm] = w
    return y


def matvec(a, x, out: np.ndarray | None = None) -> np.ndarray:
    """A @ x in double precision."""
    a = _as_matrix(a)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (a.shape[1],):
        raise ValueError(f"x must have length {a.shape[1]}, got shape {x.shape}")
    if out is None:
        return a @ x
    if out.shape != (a.shape[0],):
        raise ValueError("workspace shape mismatch")
    np.dot(a, x, out=out)
    return out


def transposed_matvec(a, y, out: np.ndarray | None = None) -> np.ndarray:
    """A.T @ y in double precision."""
    a = _as_matrix(a)
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (a.shape[0],):
        raise ValueError(f"y must have length {a.shape[0]}, got shape {y.shape}")
    if out is None:
        return a.T @ y
    if out.shape != (a.shape[1],):
        raise ValueError("workspace shape mismatch")
    np.dot(a.T, y, out=out)
    return out


def spectral_norm(a, iters: int = 50, tol: float = 1e-6) -> float:
    """Power-iteration estimate of the largest singular value of A.

    Deterministic all-ones start; accurate to ~tol relative for matrices with
    a spectral gap.  Returns 0.0 for the zero matrix.
    """
    a = _as_matrix(a)
    n = a.shape[1]
    if n == 0 or a.shape[0] == 0 or not np.abs(a).max() > 0.0:
        return 0.0
    v = np.full(n, 1.0 / np.sqrt(n))
    sigma = 0.0
    for _ in range(iters):
        # two Gram applications per sweep: doubles the convergence rate for
        # weak spectral gaps without changing the iteration budget
        w = a.T @ (a @ v)
        w = a.T @ (a @ w)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return 0.0
        v = w / nw
        # successive differences understate the remaining error, hence the
        # 0.02 safety factor on the stopping test
        prev, sigma = sigma, float(np.linalg.norm(a @ v))
        if abs(sigma - prev) <= 0.02 * tol * sigma:
            break
    return sigma
