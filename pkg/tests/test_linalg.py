import itertools

import numpy as np
import pytest

from lp2d.linalg import (
    lu_factor,
    lu_solve,
    lu_solve_transposed,
    matvec,
    spectral_norm,
    transposed_matvec,
)


def unpack(f):
    n = f.n
    lower = np.tril(f.lu, -1) + np.eye(n)
    upper = np.triu(f.lu)
    return lower, upper


def test_lu_identity():
    f = lu_factor(np.eye(3))
    lower, upper = unpack(f)
    assert np.array_equal(lower, np.eye(3))
    assert np.array_equal(upper, np.eye(3))
    assert np.array_equal(f.perm, np.arange(3))


def test_lu_forced_swap():
    a = np.array([[0.0, 1.0], [1.0, 0.0]])
    f = lu_factor(a)
    assert list(f.perm) == [1, 0]
    _, upper = unpack(f)
    assert np.array_equal(upper, np.eye(2))
    assert f.sign == -1


def test_lu_reconstruction_50x50():
    rng = np.random.default_rng(7)
    a = rng.uniform(-1, 1, size=(50, 50)) + 10.0 * np.eye(50)
    f = lu_factor(a)
    lower, upper = unpack(f)
    err = np.abs(a[f.perm] - lower @ upper).max()
    assert err <= 1e-10 * np.abs(a).max()


def test_lu_singular_raises():
    with pytest.raises(np.linalg.LinAlgError, match="singular"):
        lu_factor(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(np.linalg.LinAlgError):
        lu_factor(np.zeros((3, 3)))


def test_lu_solve_identity_and_diagonal():
    f = lu_factor(np.eye(3))
    assert np.array_equal(lu_solve(f, np.array([1.0, 2.0, 3.0])), [1.0, 2.0, 3.0])
    f = lu_factor(np.diag([2.0, 4.0]))
    assert np.array_equal(lu_solve(f, np.array([2.0, 8.0])), [1.0, 2.0])


def test_lu_solve_residual_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 30))
        a = rng.uniform(-1, 1, size=(n, n)) + n * np.eye(n)
        rhs = rng.uniform(-1, 1, size=n)
        x = lu_solve(lu_factor(a), rhs)
        resid = np.abs(a @ x - rhs).max()
        assert resid <= 1e-8 * (np.abs(a).max() * np.abs(x).max() + np.abs(rhs).max())


def test_lu_solve_transposed_matches_direct():
    rng = np.random.default_rng(13)
    for _ in range(20):
        n = int(rng.integers(2, 15))
        a = rng.uniform(-1, 1, size=(n, n)) + n * np.eye(n)
        rhs = rng.uniform(-1, 1, size=n)
        y = lu_solve_transposed(lu_factor(a), rhs)
        y_ref = lu_solve(lu_factor(a.T.copy()), rhs)
        assert np.allclose(y, y_ref, rtol=1e-10, atol=1e-12)


def test_exhaustive_2x2_vs_lapack():
    vals = (-2.0, -1.0, 0.0, 1.0, 2.0)
    rhs = np.array([1.0, -1.0])
    checked = 0
    for entries in itertools.product(vals, repeat=4):
        a = np.array(entries).reshape(2, 2)
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if det == 0.0:
            continue
        x = lu_solve(lu_factor(a), rhs)
        x_ref = np.linalg.solve(a, rhs)
        assert np.allclose(x, x_ref, rtol=1e-12, atol=1e-13), a
        checked += 1
    assert checked == 496  # nonsingular {-2..2} 2x2 matrices


def test_sampled_3x3_vs_lapack(rng):
    # full exhaustive sweep lives in the acceptance suite
    vals = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    rhs = np.array([1.0, -1.0, 2.0])
    count = 0
    while count < 2000:
        a = rng.choice(vals, size=(3, 3))
        if abs(np.linalg.det(a)) < 0.5:
            continue
        x = lu_solve(lu_factor(a), rhs)
        assert np.allclose(x, np.linalg.solve(a, rhs), rtol=1e-11, atol=1e-12)
        count += 1


def test_matvec_examples():
    assert np.array_equal(matvec(np.eye(3), [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])
    assert np.array_equal(matvec(np.array([[1.0, 2.0], [3.0, 4.0]]), [1.0, 1.0]), [3.0, 7.0])
    with pytest.raises(ValueError):
        matvec(np.eye(3), [1.0, 2.0])


def test_matvec_against_naive_loops():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m, n = rng.integers(1, 12, size=2)
        a = rng.uniform(-5, 5, size=(int(m), int(n)))
        x = rng.uniform(-5, 5, size=int(n))
        y = rng.uniform(-5, 5, size=int(m))
        ax = [sum(a[i, j] * x[j] for j in range(int(n))) for i in range(int(m))]
        aty = [sum(a[i, j] * y[i] for i in range(int(m))) for j in range(int(n))]
        scale = max(1.0, np.abs(ax).max() if len(ax) else 1.0)
        assert np.allclose(matvec(a, x), ax, rtol=1e-12, atol=1e-12 * scale)
        assert np.allclose(transposed_matvec(a, y), aty, rtol=1e-12, atol=1e-12)


def test_spectral_norm_basics():
    assert spectral_norm(np.eye(4)) == pytest.approx(1.0, rel=1e-6)
    assert spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0, rel=1e-6)
    assert spectral_norm(np.zeros((3, 2))) == 0.0


def test_spectral_norm_tall_matrix_vs_eig(rng):
    for _ in range(25):
        a = rng.uniform(-2, 2, size=(20, 2))
        gram = a.T @ a
        tr, det = gram[0, 0] + gram[1, 1], np.linalg.det(gram)
        lam = (tr + np.sqrt(max(tr * tr - 4 * det, 0.0))) / 2.0
        assert spectral_norm(a) == pytest.approx(np.sqrt(lam), rel=1e-6)


def test_workspace_reuse_identical():
    rng = np.random.default_rng(5)
    a = rng.uniform(-1, 1, size=(8, 8)) + 8 * np.eye(8)
    rhs = rng.uniform(-1, 1, size=8)
    plain_f = lu_factor(a)
    plain_x = lu_solve(plain_f, rhs)
    work_lu = np.empty_like(a)
    work_x = np.empty(8)
    reused_f = lu_factor(a, out=work_lu)
    reused_x = lu_solve(reused_f, rhs, out=work_x)
    assert np.array_equal(plain_f.lu, reused_f.lu)
    assert np.array_equal(plain_x, reused_x)
    assert reused_x is work_x
    mv_out = np.empty(8)
    assert np.array_equal(matvec(a, rhs, out=mv_out), matvec(a, rhs))
