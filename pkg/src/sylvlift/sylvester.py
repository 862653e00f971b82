"""Sylvester equations ``A X - X B = C``: direct oracles and (factored) ADI.

ADI and fADI only touch the coefficients through two operations, a
matrix product and a shifted solve.  Anything exposing

    apply(x, transpose=False)          -> M @ x   or  M.T @ x
    solve(shift, rhs, transpose=False) -> (M - shift I)^{-1} rhs  (or ^{-T})
    shape

can be passed as a coefficient; plain arrays are wrapped in
:class:`DenseOperator`.  :class:`TridiagonalOperator` gives O(n) solves.
"""
import math
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (CapacityError, DimensionError, DivergenceError, DomainError,
                     HypothesisError, ShiftCollisionError, SingularMatrixError,
                     SpectraIntersectError)
from .linalg import (_checked_lu, as_matrix, lowrank_factors_norm, numerical_rank,
                     operator_norm, singular_values, solve_dense, thomas_solve)

__all__ = [
    "DenseOperator",
    "TridiagonalOperator",
    "as_operator",
    "ShiftSchedule",
    "FactoredPair",
    "ConvergenceReport",
    "apply_sylvester",
    "solve_kron",
    "solve_neumann",
    "inverse_power_norms",
    "norm_bound_gamma",
    "adi",
    "fadi",
    "fixed_shift_schedule",
    "shift_rational",
    "recompress",
]

KRON_MAX_UNKNOWNS = 4096
SPECTRAL_NORM_MAX_DIM = 512


class DenseOperator:
    """Shifted-solve interface over an explicit square matrix.

    LU factors of ``M - shift I`` are cached per shift, so a schedule that
    repeats the same pair of shifts factorizes only once.
    """

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"coefficient must be square, got {m.shape}")
        self.matrix = m
        self.shape = m.shape
        self._lu = {}

    def apply(self, x, transpose=False):
        return (self.matrix.T if transpose else self.matrix) @ x

    def solve(self, shift, rhs, transpose=False):
        lu = self._lu.get(shift)
        if lu is None:
            shifted = self.matrix - shift * np.eye(self.shape[0])
            lu = self._lu[shift] = _checked_lu(shifted)
        return sla.lu_solve(lu, rhs, trans=1 if transpose else 0)

    def dense(self):
        return self.matrix


class TridiagonalOperator:
    """Tridiagonal coefficient with Thomas-algorithm shifted solves."""

    def __init__(self, diag, sub, sup, counter=None):
        self.diag = np.asarray(diag, dtype=float)
        self.sub = np.asarray(sub, dtype=float)
        self.sup = np.asarray(sup, dtype=float)
        n = self.diag.shape[0]
        if self.sub.shape != (n - 1,) or self.sup.shape != (n - 1,):
            raise DimensionError("sub/sup diagonals must have length n-1")
        self.shape = (n, n)
        self.counter = counter

    def apply(self, x, transpose=False):
        lo, up = (self.sup, self.sub) if transpose else (self.sub, self.sup)
        x = np.asarray(x, dtype=float)
        vector = x.ndim == 1
        if vector:
            x = x[:, None]
        y = self.diag[:, None] * x
        y[1:] += lo[:, None] * x[:-1]
        y[:-1] += up[:, None] * x[1:]
        return y[:, 0] if vector else y

    def solve(self, shift, rhs, transpose=False):
        lo, up = (self.sup, self.sub) if transpose else (self.sub, self.sup)
        return thomas_solve(self.diag, lo, up, shift, rhs, counter=self.counter)

    def dense(self):
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)


def as_operator(m):
    if hasattr(m, "solve") and hasattr(m, "apply"):
        return m
    return DenseOperator(m)


@dataclass(frozen=True)
class ShiftSchedule:
    """Paired ADI shifts; iteration j uses ``alphas[j]`` and ``betas[j]``."""

    alphas: tuple
    betas: tuple
    provenance: str = "user-supplied"

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.alphas) != len(self.betas):
            raise DimensionError("alphas and betas must have equal length")
        if self.provenance not in ("fixed-pair", "user-supplied"):
            raise DomainError(f"unknown provenance {self.provenance!r}")

    def __len__(self):
        return len(self.alphas)

    def __iter__(self):
        return iter(zip(self.alphas, self.betas))

    def head(self, k):
        return ShiftSchedule(self.alphas[:k], self.betas[:k], self.provenance)


def fixed_shift_schedule(a_lo, b_hi, k):
    """``k`` copies of the pair ``alpha = 2/(a+b)``, ``beta = (a+b)/2``.

    Suited to ``||A|| <= 1`` and a symmetric ``B`` with spectrum in
    ``[a_lo, b_hi]``, ``1 < a_lo < b_hi``.
    """
    if not a_lo > 1.0:
        raise DomainError(f"need a > 1, got {a_lo}")
    if not b_hi > a_lo:
        raise DomainError(f"need b > a, got a={a_lo}, b={b_hi}")
    if int(k) != k or k < 0:
        raise DomainError(f"iteration count must be a nonnegative integer, got {k}")
    s = a_lo + b_hi
    return ShiftSchedule((2.0 / s,) * int(k), (s / 2.0,) * int(k), "fixed-pair")


def shift_rational(shifts, z):
    """``r_k(z) = prod_j (z - alpha_j) / (z - beta_j)`` (vectorized over ``z``)."""
    z = np.asarray(z)
    r = np.ones_like(z, dtype=np.result_type(z, float))
    for al, be in shifts:
        r = r * (z - al) / (z - be)
    return r


@dataclass
class FactoredPair:
    """Low-rank iterate ``X ~= y @ z.T``."""

    y: np.ndarray
    z: np.ndarray

    @property
    def width(self):
        return self.y.shape[1]

    def to_dense(self):
        return self.y @ self.z.T

    def norm(self):
        return lowrank_factors_norm(self.y, self.z)

    def distance(self, other):
        """Spectral norm of the difference to another pair or a dense matrix."""
        if isinstance(other, FactoredPair):
            return lowrank_factors_norm(np.hstack([self.y, -other.y]),
                                        np.hstack([self.z, other.z]))
        return operator_norm(self.to_dense() - other)


@dataclass
class ConvergenceReport:
    """Per-iteration history of an ADI/fADI run.

    ``residuals[j]`` is ``||A X_j - X_j B - C||`` in the norm named by
    ``norm`` ("spectral" or "frobenius"); ``bounds`` and ``errors`` are
    only filled when the caller supplied a bound or a reference solution.
    """

    iterations: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    ranks: list = field(default_factory=list)
    widths: list = field(default_factory=list)
    times: list = field(default_factory=list)
    norm: str = "spectral"
    iterates: list = field(default_factory=list)

    def rows(self):
        """Iteration rows ``(k, residual, bound, error, rank, seconds)`` (missing -> None)."""
        out = []
        for i, k in enumerate(self.iterations):
            out.append((
                k,
                self.residuals[i] if i < len(self.residuals) else None,
                self.bounds[i] if i < len(self.bounds) else None,
                self.errors[i] if i < len(self.errors) else None,
                self.ranks[i] if i < len(self.ranks) else None,
                self.times[i],
            ))
        return out


def _check_sylvester_dims(a_shape, b_shape, x_shape, what="x"):
    m, n = a_shape[0], b_shape[0]
    if a_shape != (m, m) or b_shape != (n, n):
        raise DimensionError(f"coefficients must be square, got {a_shape} and {b_shape}")
    if x_shape != (m, n):
        raise DimensionError(f"{what} must be {m}x{n}, got {x_shape}")


def apply_sylvester(a, b, x):
    """``A X - X B``."""
    a, b, x = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(x, "x")
    _check_sylvester_dims(a.shape, b.shape, x.shape)
    return a @ x - x @ b


def solve_kron(a, b, c):
    """Solve ``A X - X B = C`` through the vectorized ``(I (x) A - B^T (x) I)`` system.

    Exact up to rounding but O((mn)^3); refuses ``m n > 4096``.
    """
    a, b, c = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(c, "c")
    _check_sylvester_dims(a.shape, b.shape, c.shape, "c")
    m, n = c.shape
    if m * n > KRON_MAX_UNKNOWNS:
        raise CapacityError(f"{m}x{n} unknowns exceed the Kronecker limit {KRON_MAX_UNKNOWNS}")
    big = np.kron(np.eye(n), a) - np.kron(b.T, np.eye(m))
    try:
        vec = solve_dense(big, c.reshape(-1, order="F"))
    except SingularMatrixError as exc:
        raise SpectraIntersectError("spectra of A and B intersect (Sylvester operator singular)",
                                    pivot=exc.pivot) from exc
    return vec.reshape((m, n), order="F")


def inverse_power_norms(b, cap=500, rtol=1e-12, start=1):
    """Norms ``||B^{-j}||_2`` for ``j >= 1`` until the tail is negligible.

    Returns ``(norms, tail)`` where ``norms[j-1] = ||B^{-j}||`` and ``tail``
    is a geometric extrapolation of ``sum_{j > len(norms)} ||B^{-j}||``.
    The ratio test uses the largest of the last few consecutive ratios, so
    transient growth (non-normal ``B``) does not stop the sum early.
    Convergence is judged on the part of the series from ``start`` on.
    Raises :class:`DivergenceError` when ``cap`` terms do not suffice.
    """
    b = as_matrix(b, "b")
    if b.shape[0] != b.shape[1]:
        raise DimensionError(f"b must be square, got {b.shape}")
    try:
        lu = _checked_lu(b)
    except SingularMatrixError as exc:
        raise DivergenceError("B is singular; its inverse powers are undefined") from exc
    power = np.eye(b.shape[0])
    norms = []
    window = 4
    for j in range(1, cap + 1):
        power = sla.lu_solve(lu, power)
        t = float(np.linalg.svd(power, compute_uv=False)[0])
        norms.append(t)
        if t == 0.0:
            return norms, 0.0
        if j >= max(start, 2) + window:
            ratios = [norms[i] / norms[i - 1] for i in range(j - window, j)]
            r = max(ratios)
            if r < 1.0:
                tail = t * r / (1.0 - r)
                partial = sum(norms[start - 1:])
                if tail <= rtol * partial:
                    return norms, tail
    raise DivergenceError(f"sum of ||B^-j|| not converged within {cap} terms "
                          "(spectrum of B not certified outside the unit disk)")


def norm_bound_gamma(b, cap=500):
    """``gamma = sum_{j>=1} ||B^{-j}||_2``, finite iff sigma(B) lies outside the closed unit disk.

    For ``||A|| <= 1`` this gives ``||X|| <= gamma ||A X - X B||``.
    """
    norms, tail = inverse_power_norms(b, cap=cap)
    return math.fsum(norms) + tail


def solve_neumann(a, b, c, tol=1e-14, max_terms=100000):
    """Solve ``A X - X B = C`` by the series ``X = -sum_n A^n C B^{-(n+1)}``.

    Requires ``||A|| <= 1`` and the spectrum of ``B`` outside the closed
    unit disk; both are checked (the latter by summing ``||B^{-n}||``).
    The series stops when a term drops below ``tol * ||C||``.
    """
    a, b, c = as_matrix(a, "a"), as_matrix(b, "b"), as_matrix(c, "c")
    _check_sylvester_dims(a.shape, b.shape, c.shape, "c")
    if operator_norm(a) > 1.0 + 1e-12:
        raise HypothesisError(f"||A|| = {operator_norm(a)} exceeds 1")
    try:
        norm_bound_gamma(b)
    except DivergenceError as exc:
        raise HypothesisError(str(exc)) from exc
    norm_c = operator_norm(c)
    if norm_c == 0.0:
        return np.zeros_like(c)
    lu = _checked_lu(b)

    def right_inv(m):
        # m @ B^{-1}
        return sla.lu_solve(lu, m.T, trans=1).T

    term = right_inv(c)
    x = np.zeros_like(c)
    for _ in range(max_terms):
        x -= term
        if operator_norm(term) < tol * norm_c:
            return x
        term = right_inv(a @ term)
    raise DivergenceError(f"Neumann series not converged within {max_terms} terms")


def _residual_norm(kind, mat):
    if kind == "spectral":
        return float(singular_values(mat)[0]) if mat.size else 0.0
    return float(np.linalg.norm(mat))


def adi(a, b, c, shifts, x0=None, bound=None, exact=None, keep_iterates=False,
        track_rank=True):
    """Alternating direction implicit iteration for ``A X - X B = C``.

    Each iteration solves ``(A - beta_j) X_half = X_{j-1}(B - beta_j) + C``
    and then ``X_j (B - alpha_j) = (A - alpha_j) X_half - C``.

    Parameters
    ----------
    a, b : array or operator
        Coefficients (see module docstring for the operator protocol).
    c : (m, n) array
    shifts : ShiftSchedule
    x0 : (m, n) array, optional
        Initial guess, zero by default.
    bound : callable, optional
        ``bound(k)`` recorded in the report at every iteration.
    exact : (m, n) array, optional
        Reference solution; relative spectral errors are recorded.
    keep_iterates : bool
        Store a copy of every iterate in ``report.iterates``.

    Returns
    -------
    x : (m, n) array
    report : ConvergenceReport
    """
    aop, bop = as_operator(a), as_operator(b)
    c = as_matrix(c, "c")
    _check_sylvester_dims(aop.shape, bop.shape, c.shape, "c")
    x = np.zeros_like(c) if x0 is None else as_matrix(x0, "x0").copy()
    _check_sylvester_dims(aop.shape, bop.shape, x.shape, "x0")
    kind = "spectral" if max(c.shape) <= SPECTRAL_NORM_MAX_DIM else "frobenius"
    report = ConvergenceReport(norm=kind)
    exact_norm = operator_norm(exact) if exact is not None else None
    t0 = time.perf_counter()
    for j, (al, be) in enumerate(shifts, start=1):
        try:
            xb = bop.apply(x.T, transpose=True).T
            half = aop.solve(be, xb - be * x + c)
            rhs = aop.apply(half) - al * half - c
            x = bop.solve(al, rhs.T, transpose=True).T
        except SingularMatrixError as exc:
            raise ShiftCollisionError(f"shifted system singular at iteration {j} "
                                      f"(alpha={al}, beta={be})", iteration=j,
                                      pivot=exc.pivot) from exc
        report.times.append(time.perf_counter() - t0)
        report.iterations.append(j)
        resid = aop.apply(x) - bop.apply(x.T, transpose=True).T - c
        report.residuals.append(_residual_norm(kind, resid))
        if track_rank:
            report.ranks.append(numerical_rank(x) if np.any(x) else 0)
        if bound is not None:
            report.bounds.append(float(bound(j)))
        if exact is not None:
            report.errors.append(operator_norm(x - exact) / exact_norm)
        if keep_iterates:
            report.iterates.append(x.copy())
    return x, report


def fadi(a, b, f, g, shifts, bound=None, reference=None, track_residual=True):
    """Factored ADI for ``A X - X B = F G^T``.

    Iteration j solves

        (A - beta_j) Y_j = [F, (A - alpha_j) Y_{j-1}]
        (B - alpha_j)^T Z_j = [(beta_j - alpha_j) G, (B - beta_j)^T Z_{j-1}]

    starting from empty factors, so ``Y_j Z_j^T`` equals the ADI iterate
    from ``X_0 = 0`` and has ``j * r`` columns.  No column compression is
    done (see :func:`recompress`).

    Parameters
    ----------
    a, b : array or operator
    f : (m, r) array
    g : (n, r) array
    shifts : ShiftSchedule
    bound : callable, optional
        ``bound(k)`` stored in the report.
    reference : FactoredPair or (m, n) array, optional
        Reference solution for relative spectral errors.
    track_residual : bool
        Compute the spectral residual and rank through the factors at every
        iteration, O((m + n) p^2).

    Returns
    -------
    pair : FactoredPair
    report : ConvergenceReport
    """
    aop, bop = as_operator(a), as_operator(b)
    f, g = as_matrix(f, "f"), as_matrix(g, "g")
    m, n = aop.shape[0], bop.shape[0]
    if f.shape[0] != m or g.shape[0] != n or f.shape[1] != g.shape[1]:
        raise DimensionError(f"factors must be {m}xr and {n}xr, got {f.shape} and {g.shape}")
    y = np.zeros((m, 0))
    z = np.zeros((n, 0))
    report = ConvergenceReport(norm="spectral")
    if reference is not None:
        if not isinstance(reference, FactoredPair):
            reference = as_matrix(reference, "reference")
        ref_norm = (reference.norm() if isinstance(reference, FactoredPair)
                    else operator_norm(reference))
    t0 = time.perf_counter()
    for j, (al, be) in enumerate(shifts, start=1):
        try:
            y = aop.solve(be, np.hstack([f, aop.apply(y) - al * y]))
            z = bop.solve(al, np.hstack([(be - al) * g,
                                         bop.apply(z, transpose=True) - be * z]),
                          transpose=True)
        except SingularMatrixError as exc:
            raise ShiftCollisionError(f"shifted system singular at iteration {j} "
                                      f"(alpha={al}, beta={be})", iteration=j,
                                      pivot=exc.pivot) from exc
        report.times.append(time.perf_counter() - t0)
        report.iterations.append(j)
        report.widths.append(y.shape[1])
        if track_residual:
            left = np.hstack([aop.apply(y), -y, -f])
            right = np.hstack([z, bop.apply(z, transpose=True), g])
            res = lowrank_factors_norm(left, right)
            report.residuals.append(res)
            _, rank = lowrank_factors_norm(y, z, compute_rank=True)
            report.ranks.append(rank)
        if bound is not None:
            report.bounds.append(float(bound(j)))
        if reference is not None:
            pair = FactoredPair(y, z)
            report.errors.append(pair.distance(reference) / ref_norm)
    return FactoredPair(y, z), report


def recompress(pair, rtol=1e-12):
    """Truncated-SVD recompression of a factored iterate (not used by default)."""
    if pair.width == 0:
        return pair
    qy, ry = np.linalg.qr(pair.y)
    qz, rz = np.linalg.qr(pair.z)
    u, s, vt = np.linalg.svd(ry @ rz.T)
    r = int(np.count_nonzero(s > rtol * s[0])) if s[0] > 0 else 0
    return FactoredPair(qy @ (u[:, :r] * s[:r]), qz @ vt[:r].T)
