"""Unitary dilations of a contraction and lifted Sylvester solutions.

For ``||A|| <= 1`` the block operator ``U_{n,A}`` on ``n`` copies of the
base space is unitary and its top-left block of ``U^k`` is ``A^k`` for
``k < n``.  Given a solution of ``A X - X B = C`` with the spectrum of
``B`` outside the unit disk, :func:`lift_finite` builds a stacked ``Y``
whose top block is ``X`` and which nearly solves ``U Y - Y B = J C``;
:func:`lift_truncated_infinite` gives the exact (infinite) lift truncated
to ``m`` blocks together with a bound on the omitted tail.

Block positions inside the stacked matrices play the role of the direct
sum decomposition: block 0 is the original space.
"""
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (ContractionError, DimensionError, DivergenceError, DomainError,
                     HypothesisError, InconsistentInputError, SearchError)
from .linalg import as_matrix, numerical_rank, operator_norm, svd
from .sylvester import inverse_power_norms, norm_bound_gamma, solve_kron

__all__ = [
    "DefectPair",
    "FiniteDilation",
    "LiftedSolution",
    "TruncatedLift",
    "Counterexample",
    "defect_pair",
    "finite_unitary_dilation",
    "embed",
    "top_block",
    "lift_finite",
    "lift_truncated_infinite",
    "counterexample_series",
    "counterexample_instance",
]

_NORM_SLACK = 1e-10


@dataclass(frozen=True)
class DefectPair:
    """``d = sqrt(I - A^T A)`` and ``d_star = sqrt(I - A A^T)``."""

    d: np.ndarray
    d_star: np.ndarray


def _as_contraction(a):
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"a must be square, got {a.shape}")
    nrm = operator_norm(a)
    if nrm > 1.0 + _NORM_SLACK:
        raise ContractionError(f"||A|| = {nrm!r} exceeds 1")
    return a


def defect_pair(a):
    """Defect operators of a contraction ``A``.

    Both come from one SVD ``A = U diag(s) V^T``: ``D = V diag(sqrt(1 - s^2)) V^T``
    and ``D_* = U diag(sqrt(1 - s^2)) U^T``.  Sharing the singular vectors
    keeps ``D_* A = A D`` exact up to rounding even when some ``s_i = 1``,
    where separate square roots of ``I - A^T A`` and ``I - A A^T`` would
    disagree at the 1e-8 level.
    """
    a = _as_contraction(a)
    dec = svd(a)
    s = np.clip(dec.singular_values, 0.0, 1.0)
    root = np.sqrt((1.0 - s) * (1.0 + s))
    d = (dec.v * root) @ dec.v.T
    d_star = (dec.u * root) @ dec.u.T
    return DefectPair(0.5 * (d + d.T), 0.5 * (d_star + d_star.T))


@dataclass(frozen=True)
class FiniteDilation:
    n: int
    u: np.ndarray
    base_dim: int

    def compression(self, k):
        """Top-left block of ``U^k``."""
        m = self.base_dim
        return np.linalg.matrix_power(self.u, k)[:m, :m]


def finite_unitary_dilation(a, n):
    """The ``n``-block unitary dilation ``U_{n,A}``.

    Block layout (``D``, ``D_*`` the defect operators)::

        [ A  0 ... 0  D_* ]
        [ D  0 ... 0  -A^T]
        [ 0  I        0   ]
        [        ...      ]
        [ 0     I     0   ]
    """
    if int(n) != n or n < 2:
        raise DomainError(f"dilation needs n >= 2 blocks, got {n}")
    n = int(n)
    a = _as_contraction(a)
    dp = defect_pair(a)
    m = a.shape[0]
    u = np.zeros((n * m, n * m))
    last = slice((n - 1) * m, n * m)
    u[:m, :m] = a
    u[:m, last] = dp.d_star
    u[m:2 * m, :m] = dp.d
    u[m:2 * m, last] = -a.T
    for i in range(2, n):
        u[i * m:(i + 1) * m, (i - 1) * m:i * m] = np.eye(m)
    return FiniteDilation(n, u, m)


def embed(x, n):
    """``J_n x``: ``x`` on top of ``n - 1`` zero blocks."""
    x = as_matrix(x)
    return np.vstack([x, np.zeros(((n - 1) * x.shape[0], x.shape[1]))])


def top_block(y, m):
    return y[:m]


@dataclass
class LiftedSolution:
    """Result of :func:`lift_finite`.

    ``y`` stacks ``X, Y_2, ..., Y_n``; ``z`` is the exact solution of
    ``U Z - Z B = J_n C``.  ``defect_norm`` is ``||D_* Y_n||``, the size of
    the perturbation ``y`` carries in its right-hand side.
    """

    y: np.ndarray
    z: np.ndarray
    n: int
    defect_norm: float
    lemma_residual: float
    y_minus_z: float
    gamma: float
    bound: float


def _check_outside_disk(b):
    try:
        return norm_bound_gamma(b)
    except DivergenceError as exc:
        raise HypothesisError(f"spectrum of B not certified outside the unit disk: {exc}") from exc


def _check_solution(a, b, c, x, rtol=1e-8):
    resid = a @ x - x @ b - c
    scale = 1.0 + operator_norm(c)
    if operator_norm(resid) > rtol * scale:
        raise InconsistentInputError("X does not solve A X - X B = C to tolerance")


def _lift_inputs(a, b, c, x):
    a = _as_contraction(a)
    b, c, x = as_matrix(b, "b"), as_matrix(c, "c"), as_matrix(x, "x")
    m, q = x.shape
    if a.shape != (m, m) or b.shape != (q, q) or c.shape != (m, q):
        raise DimensionError("inconsistent shapes for A X - X B = C")
    return a, b, c, x


def lift_finite(a, b, c, x, n):
    """Lift ``A X - X B = C`` to ``U_{n,A} Z - Z B = J_n C``.

    ``Y_n`` solves ``A^T Y_n + Y_n B^{n-1} = D X`` (dense Kronecker solve),
    ``Y_k = Y_n B^{n-k}`` for ``2 <= k <= n-1`` and ``Y_1 = X``.  The stack
    satisfies ``U Y - Y B = J_n (C + D_* Y_n)`` exactly, and
    ``||Y - Z|| <= gamma^2 ||D X||`` with ``gamma = sum ||B^-j||``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"lift needs n >= 2 blocks, got {n}")
    n = int(n)
    a, b, c, x = _lift_inputs(a, b, c, x)
    gamma = _check_outside_disk(b)
    _check_solution(a, b, c, x)
    m, q = x.shape
    dp = defect_pair(a)
    dil = finite_unitary_dilation(a, n)

    bpow = np.linalg.matrix_power(b, n - 1)
    dx = dp.d @ x
    y_n = solve_kron(-a.T, bpow, -dx)
    blocks = [x]
    for k in range(2, n):
        blocks.append(y_n @ np.linalg.matrix_power(b, n - k))
    blocks.append(y_n)
    y = np.vstack(blocks)

    lhs = dil.u @ y - y @ b
    rhs = embed(c + dp.d_star @ y_n, n)
    lemma_residual = operator_norm(lhs - rhs)
    if lemma_residual > 1e-8 * (1.0 + operator_norm(rhs)):
        raise InconsistentInputError(f"lifted identity fails (residual {lemma_residual:.3e})")

    z = solve_kron(dil.u, b, embed(c, n))
    return LiftedSolution(
        y=y,
        z=z,
        n=n,
        defect_norm=operator_norm(dp.d_star @ y_n),
        lemma_residual=lemma_residual,
        y_minus_z=operator_norm(y - z),
        gamma=gamma,
        bound=gamma ** 2 * operator_norm(dx),
    )


@dataclass
class TruncatedLift:
    """First ``m`` blocks ``X, D X B^{-1}, D X B^{-2}, ...`` of the exact lift."""

    stack: np.ndarray
    blocks: list
    tail_bound: float
    component_residuals: list

    @property
    def max_residual(self):
        return max(self.component_residuals)


def lift_truncated_infinite(a, b, c, x, m):
    """Truncation of the isometric-dilation lift to ``m`` blocks.

    The blocks satisfy ``A Z_1 - Z_1 B = C``, ``D Z_1 - Z_2 B = 0`` and
    ``Z_k - Z_{k+1} B = 0``; every identity is checked to 1e-9 (relative to
    the size of ``C``).  ``tail_bound = ||X|| sum_{k>=m} ||B^-k||`` bounds
    the norm of everything dropped.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"need at least one block, got {m}")
    m = int(m)
    a, b, c, x = _lift_inputs(a, b, c, x)
    _check_outside_disk(b)
    _check_solution(a, b, c, x)
    dp = defect_pair(a)
    lu = sla.lu_factor(b)

    blocks = [x]
    if m >= 2:
        blocks.append(sla.lu_solve(lu, (dp.d @ x).T, trans=1).T)
    for _ in range(3, m + 1):
        blocks.append(sla.lu_solve(lu, blocks[-1].T, trans=1).T)

    scale = 1.0 + operator_norm(c)
    residuals = [operator_norm(a @ blocks[0] - blocks[0] @ b - c) / scale]
    if m >= 2:
        residuals.append(operator_norm(dp.d @ blocks[0] - blocks[1] @ b) / scale)
    for k in range(1, m - 1):
        residuals.append(operator_norm(blocks[k] - blocks[k + 1] @ b) / scale)
    worst = max(residuals)
    if worst > 1e-9:
        raise InconsistentInputError(f"lift component identity fails (residual {worst:.3e})")

    norms, tail = inverse_power_norms(b, start=max(m, 1))
    tail_sum = math.fsum(norms[m - 1:]) + tail if m - 1 < len(norms) else tail
    return TruncatedLift(np.vstack(blocks), blocks, operator_norm(x) * tail_sum, residuals)


def _jordan(n, lam):
    return lam * np.eye(n) + np.eye(n, k=1)


def counterexample_series(n, b, tol=1e-14, cap=100000):
    """``sum_{k>=1} s_2(B_b)^k ||T_b^k||`` for the ``n x n`` Jordan block ``T_b``.

    Terms eventually shrink geometrically with ratio ``s_2(B_b) * b``; the
    sum stops once the ratio-test tail estimate is below ``tol`` times the
    partial sum.  Returns ``inf`` when the terms do not settle below one.
    """
    t = _jordan(n, b)
    s2 = svd(np.linalg.inv(t)).singular_values[1]
    power = np.eye(n)
    total = 0.0
    prev = None
    for k in range(1, cap + 1):
        power = power @ (s2 * t)
        term = operator_norm(power)
        total += term
        if not math.isfinite(total):
            return math.inf
        if prev is not None and k > n:
            r = term / prev
            if r < 1.0 and term * r / (1.0 - r) < tol * total:
                return total + term * r / (1.0 - r)
            if r >= 1.0 and k > 4 * n + 50:
                return math.inf
        prev = term
    return math.inf


@dataclass
class Counterexample:
    """``A X - X B_scaled = C`` with ``X = I``, rank-one ``C`` and ``||A|| = 1``."""

    a: np.ndarray
    b_scaled: np.ndarray
    c: np.ndarray
    x: np.ndarray
    b_param: float
    series: float


def counterexample_instance(n, steps=100):
    """Sylvester equation with separated spectra but no singular value decay.

    ``b`` is the largest value in ``(0, 1)`` (to bisection accuracy) with
    ``sum_k s_2(B_b)^k ||T_b^k|| <= n``, where ``T_b`` is the upper Jordan
    block with eigenvalue ``b`` and ``B_b = T_b^{-1}``.  With ``R`` the best
    rank-one approximation of ``B_b``: ``A = (B_b - R)/s_2``,
    ``C = -R/s_2`` and ``X = I``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    n = int(n)

    def ok(bb):
        return counterexample_series(n, bb) <= n

    lo, hi = 0.0, 1.0
    probe = 0.5
    while not ok(probe):
        probe *= 0.5
        if probe < 1e-12:
            raise SearchError("no admissible b found")
    lo = probe
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    b = lo
    bb = np.linalg.inv(_jordan(n, b))
    dec = svd(bb)
    s2 = dec.singular_values[1]
    r = dec.truncate(1).reconstruct()
    a = (bb - r) / s2
    c = -r / s2
    x = np.eye(n)
    b_scaled = bb / s2

    resid = operator_norm(a @ x - x @ b_scaled - c)
    if resid > 1e-10 * (1.0 + operator_norm(c)):
        raise InconsistentInputError(f"counterexample residual {resid:.3e}")
    if numerical_rank(c) != 1:
        raise InconsistentInputError("counterexample right-hand side is not rank one")
    series = counterexample_series(n, b)
    return Counterexample(a, b_scaled, c, x, b, series)
