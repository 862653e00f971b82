import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sylvlift.errors import DimensionError, NotPSDError, SingularMatrixError, ValidationError
from sylvlift.linalg import (as_matrix, lowrank_factors_norm, numerical_rank, operator_norm,
                             psd_sqrt, singular_values, solve_dense, svd, sym_eig,
                             thomas_solve)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_as_matrix_promotes_scalars_and_vectors():
    assert as_matrix(3.0).shape == (1, 1)
    assert as_matrix([1.0, 2.0]).shape == (2, 1)
    with pytest.raises(ValidationError):
        as_matrix([[np.nan]])
    with pytest.raises(DimensionError):
        as_matrix(np.zeros((2, 2, 2)))


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_svd_reconstructs_and_orders(m):
    res = svd(m)
    assert np.allclose(res.reconstruct(), m, atol=1e-10 * (1 + np.abs(m).max()))
    assert np.all(np.diff(res.singular_values) <= 1e-12)
    assert np.all(res.singular_values >= 0)


def test_singular_values_of_identity_and_rank():
    assert np.allclose(singular_values(np.eye(4)), 1.0)
    assert numerical_rank(np.outer([1, 2, 3], [1, 1])) == 1
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert operator_norm(np.diag([3.0, -5.0])) == pytest.approx(5.0)


def test_truncate_gives_best_rank_one():
    m = np.diag([3.0, 2.0, 1.0])
    r1 = svd(m).truncate(1).reconstruct()
    assert operator_norm(m - r1) == pytest.approx(2.0)


def test_sym_eig_rejects_nonsymmetric():
    vals, _ = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(vals, [1.0, 3.0])
    with pytest.raises(ValidationError):
        sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_squares_back_and_clamps(rng):
    g = rng.standard_normal((5, 3))
    p = g @ g.T  # rank 3, two zero eigenvalues up to rounding
    s = psd_sqrt(p)
    assert np.allclose(s @ s, p, atol=1e-10)
    with pytest.raises(NotPSDError):
        psd_sqrt(-np.eye(2))


def test_solve_dense_and_singular_pivot(rng):
    a = rng.standard_normal((6, 6)) + 6 * np.eye(6)
    b = rng.standard_normal((6, 2))
    assert np.allclose(a @ solve_dense(a, b), b)
    with pytest.raises(SingularMatrixError):
        solve_dense(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 30), st.floats(0.5, 10), st.integers(0, 2 ** 31))
def test_thomas_matches_dense(n, shift, seed):
    r = np.random.default_rng(seed)
    diag = -2.0 * np.ones(n)
    off = np.ones(n - 1)
    rhs = r.standard_normal((n, 3))
    t = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    x = thomas_solve(diag, off, off, shift, rhs)
    assert np.allclose(x, np.linalg.solve(t - shift * np.eye(n), rhs), atol=1e-10)


def test_thomas_counter_is_linear():
    counts = []
    for n in (100, 200, 400):
        c = {}
        thomas_solve(-2 * np.ones(n), np.ones(n - 1), np.ones(n - 1), 1.0, np.ones((n, 2)),
                     counter=c)
        counts.append(c["flops"])
    assert counts[1] == 2 * counts[0] and counts[2] == 2 * counts[1]


def test_thomas_zero_pivot():
    with pytest.raises(SingularMatrixError):
        thomas_solve(np.zeros(2), np.ones(1), np.ones(1), 0.0, np.ones(2))


def test_lowrank_norm_matches_dense(rng):
    left = rng.standard_normal((40, 3))
    right = rng.standard_normal((30, 3))
    nrm, rank = lowrank_factors_norm(left, right, compute_rank=True)
    assert nrm == pytest.approx(np.linalg.norm(left @ right.T, 2), rel=1e-12)
    assert rank == 3
