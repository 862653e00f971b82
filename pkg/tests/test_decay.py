import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import random_contraction, random_symmetric_in
from sylvlift.decay import (bt_decay_check, fastdecay_bound, fastdecay_check,
                            singvaldil_ratio_bound)
from sylvlift.errors import DomainError, SeparationError
from sylvlift.sylvester import solve_kron


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 16), st.integers(1, 3), st.floats(0.05, 2.0), st.integers(0, 2 ** 31))
def test_normal_decay_property(n, v, gap, seed):
    rng = np.random.default_rng(seed)
    a_diag = rng.uniform(-1.0, 1.0, n)
    b_diag = rng.uniform(1.0 + gap, 3.0 + gap, n)
    c = rng.standard_normal((n, v)) @ rng.standard_normal((v, n))
    x = solve_kron(np.diag(a_diag), np.diag(b_diag), c)
    rep = bt_decay_check(a_diag, b_diag, c, x, k_max=4, l_max=3)
    assert rep.passed, rep.checks


def test_bt_check_trivial_and_separation():
    rep = bt_decay_check([0.0], [2.0], np.zeros((1, 1)), np.zeros((1, 1)), 1, 1)
    assert rep.passed and "trivially" in rep.note
    with pytest.raises(SeparationError):
        bt_decay_check([0.0, 2.0], [1.0, 3.0], np.ones((2, 2)), np.ones((2, 2)), 1, 1)


def test_fastdecay_bound_formula():
    gamma = (3 * 9 / (1 * 11)) ** 2  # a = 2, b = 10
    expected = 4 * (1 + 1.0) * np.exp(-np.pi ** 2 / np.log(16 * gamma))
    assert fastdecay_bound(1, 1, 1, 2.0, 10.0, 1.0, 1.0) == pytest.approx(expected)
    assert fastdecay_bound(1, 0, 1, 2.0, 10.0, 1.0, 1.0) == pytest.approx(8.0)
    with pytest.raises(DomainError):
        fastdecay_bound(1, 1, 1, 1.0, 10.0, 1.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(4, 14), st.floats(1.1, 4.0), st.floats(0.5, 20.0), st.integers(1, 2),
       st.sampled_from(["mix", "scaled", "orthogonal"]), st.integers(0, 2 ** 31))
def test_nonnormal_decay_property(n, a, width, v, kind, seed):
    rng = np.random.default_rng(seed)
    amat = random_contraction(rng, n, kind)
    b = a + width
    bmat = random_symmetric_in(rng, n, a, b)
    c = rng.standard_normal((n, v)) @ rng.standard_normal((v, n))
    x = solve_kron(amat, bmat, c)
    rep = fastdecay_check(c, x, a, b, k_max=3, l_max=2)
    assert rep.passed, rep.checks


def test_singvaldil_ratio_bound_identity_case():
    s = np.array([3.0, 2.0, 1.0])
    # Z = J X, Y = Z: the bound reduces to s_l / s_k
    assert singvaldil_ratio_bound(s, s, 0.0, 0.0, 1, 3) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        singvaldil_ratio_bound(s, s, 0.0, 0.0, 4, 1)
