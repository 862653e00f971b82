import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import solve_sylvester

from oracles import random_contraction, random_symmetric_in
from sylvlift.errors import (CapacityError, DimensionError, DomainError, HypothesisError,
                             ShiftCollisionError, SpectraIntersectError)
from sylvlift.sylvester import (DenseOperator, FactoredPair, ShiftSchedule, TridiagonalOperator,
                                adi, apply_sylvester, fadi, fixed_shift_schedule,
                                inverse_power_norms, norm_bound_gamma, recompress,
                                shift_rational, solve_kron, solve_neumann)


def test_kron_matches_scipy(rng):
    a = rng.standard_normal((5, 5))
    b = rng.standard_normal((4, 4)) + 8 * np.eye(4)
    c = rng.standard_normal((5, 4))
    x = solve_kron(a, b, c)
    assert np.allclose(apply_sylvester(a, b, x), c, atol=1e-10)
    assert np.allclose(x, solve_sylvester(a, -b, c), atol=1e-10)


def test_kron_errors():
    with pytest.raises(SpectraIntersectError):
        solve_kron(np.eye(2), np.eye(2), np.ones((2, 2)))
    with pytest.raises(CapacityError):
        solve_kron(np.eye(70), np.eye(70) * 3, np.ones((70, 70)))
    with pytest.raises(DimensionError):
        solve_kron(np.eye(2), np.eye(3), np.ones((3, 2)))


def test_scalar_equation():
    # a x - x b = c with a = 0.5, b = 2: x = c / (a - b)
    assert solve_kron(0.5, 2.0, 3.0)[0, 0] == pytest.approx(-2.0)
    assert solve_neumann(0.5, 2.0, 3.0)[0, 0] == pytest.approx(-2.0)


def test_neumann_matches_kron(rng):
    a = random_contraction(rng, 4)
    b = random_symmetric_in(rng, 3, 1.5, 5)
    c = rng.standard_normal((4, 3))
    assert np.allclose(solve_neumann(a, b, c), solve_kron(a, b, c), atol=1e-10)
    with pytest.raises(HypothesisError):
        solve_neumann(2 * np.eye(2), 3 * np.eye(2), np.ones((2, 2)))
    with pytest.raises(HypothesisError):
        solve_neumann(np.eye(2) * 0.5, 0.9 * np.eye(2), np.ones((2, 2)))


def test_gamma_bounds_solution_norm(rng):
    for _ in range(20):
        a = random_contraction(rng, 4)
        b = random_symmetric_in(rng, 4, 1.3, 6)
        c = rng.standard_normal((4, 4))
        x = solve_kron(a, b, c)
        gamma = norm_bound_gamma(b)
        assert np.linalg.norm(x, 2) <= gamma * np.linalg.norm(c, 2) * (1 + 1e-10)


def test_gamma_closed_form_for_scalar():
    # sum_{j>=1} 2^-j = 1
    assert norm_bound_gamma(np.array([[2.0]])) == pytest.approx(1.0, rel=1e-10)
    norms, _ = inverse_power_norms(np.array([[4.0]]), start=3)
    assert norms[2] == pytest.approx(4.0 ** -3)


def test_schedule_and_rational():
    s = fixed_shift_schedule(2, 10, 3)
    assert len(s) == 3 and s.provenance == "fixed-pair"
    assert list(s)[0] == pytest.approx((1 / 6, 6))
    assert len(s.head(2)) == 2
    assert shift_rational(s, 1 / 6) == 0
    with pytest.raises(DomainError):
        fixed_shift_schedule(0.5, 10, 3)
    with pytest.raises(DimensionError):
        ShiftSchedule((1.0,), (1.0, 2.0))


def test_operators_agree_with_dense(rng):
    n = 7
    d, lo, up = rng.standard_normal(n), rng.standard_normal(n - 1), rng.standard_normal(n - 1)
    tri = TridiagonalOperator(d + 5, lo, up)
    dense = DenseOperator(tri.dense())
    x = rng.standard_normal((n, 2))
    for tr in (False, True):
        assert np.allclose(tri.apply(x, tr), dense.apply(x, tr))
        assert np.allclose(tri.solve(0.3, x, tr), dense.solve(0.3, x, tr))


def _instance(rng, m, n, r):
    a = 0.9 * random_contraction(rng, m)
    b = random_symmetric_in(rng, n, 2.0, 4.0)
    f, g = rng.standard_normal((m, r)), rng.standard_normal((n, r))
    return a, b, f, g


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 3), st.integers(1, 5),
       st.integers(0, 2 ** 31))
def test_adi_equals_fadi(m, n, r, k, seed):
    rng = np.random.default_rng(seed)
    a, b, f, g = _instance(rng, m, n, r)
    shifts = ShiftSchedule(rng.uniform(-1, 1, k), rng.uniform(2, 4, k))
    x, _ = adi(a, b, f @ g.T, shifts)
    pair, rep = fadi(a, b, f, g, shifts)
    assert np.max(np.abs(x - pair.to_dense())) <= 1e-9
    assert rep.widths[-1] == k * r


def test_adi_converges_with_fixed_pair(rng):
    a, b, f, g = _instance(rng, 8, 6, 2)
    c = f @ g.T
    exact = solve_kron(a, b, c)
    x, rep = adi(a, b, c, fixed_shift_schedule(2, 4, 25), exact=exact)
    assert rep.errors[-1] < 1e-12
    assert np.allclose(x, exact)
    assert rep.residuals[-1] < 1e-10


def test_fadi_report_residual_and_errors(rng):
    a, b, f, g = _instance(rng, 9, 7, 2)
    exact = solve_kron(a, b, f @ g.T)
    pair, rep = fadi(a, b, f, g, fixed_shift_schedule(2, 4, 6), reference=exact,
                     bound=lambda k: 1.0)
    dense_res = np.linalg.norm(a @ pair.to_dense() - pair.to_dense() @ b - f @ g.T, 2)
    assert rep.residuals[-1] == pytest.approx(dense_res, rel=1e-8, abs=1e-14)
    assert rep.errors[-1] == pytest.approx(pair.distance(exact) / np.linalg.norm(exact, 2))
    assert len(rep.rows()) == 6 and rep.bounds == [1.0] * 6


def test_shift_collision_names_iteration():
    a = np.diag([1.0, 2.0])
    b = np.diag([5.0, 6.0])
    shifts = ShiftSchedule((0.0, 0.0), (3.0, 2.0))
    with pytest.raises(ShiftCollisionError) as info:
        adi(a, b, np.ones((2, 2)), shifts)
    assert info.value.iteration == 2
    with pytest.raises(ShiftCollisionError):
        fadi(a, b, np.ones((2, 1)), np.ones((2, 1)), shifts)


def test_recompress_preserves_product(rng):
    y = rng.standard_normal((10, 2))
    pair = FactoredPair(np.hstack([y, y]), np.hstack([np.ones((8, 2)), np.ones((8, 2))]))
    small = recompress(pair)
    assert small.width <= 2
    assert np.allclose(small.to_dense(), pair.to_dense())
