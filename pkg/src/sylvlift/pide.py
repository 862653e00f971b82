"""Partial integro-differential equation

    int_0^x a(t) u(t, y) dt + u_yy(x, y) = f(x, y),   u(x, 0) = u(x, 1) = 0

on the unit square, discretized on the interior grid ``j/(n+1)`` with the
trapezoidal rule in ``x`` and centered differences in ``y``.  The result is
the Sylvester equation ``A U - U B = F`` with

* ``A = S / (n+1)``: lower triangular, diagonal ``a_k/2``, strictly lower
  part of column ``k`` constant (``a_1/2`` for ``k = 1``, ``a_k`` otherwise);
* ``B = -(n+1)^2 T`` with ``T = tridiag(1, -2, 1)``.

Both coefficients admit O(n) shifted solves, so fADI with the fixed shift
pair runs in time linear in ``n`` for a low-rank ``F``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, HypothesisError, SingularMatrixError, ValidationError
from .sylvester import (KRON_MAX_UNKNOWNS, ConvergenceReport, FactoredPair,
                        TridiagonalOperator, fadi, fixed_shift_schedule, solve_kron)

__all__ = [
    "PideProblem",
    "PideDiscretization",
    "SemiseparableOperator",
    "PideSolution",
    "discretize",
    "semiseparable_solve",
    "s_prime_norm",
    "spectral_window",
    "iterations_required",
    "error_bound",
    "factor_rhs",
    "cross_approximation",
    "solve_pide",
    "reference_solution",
    "table1",
    "worked_example",
    "TABLE1",
]

A_MAX_LIMIT = 4.0
SIMPLE_A_MAX_LIMIT = math.sqrt(8.0 + 32.0 / math.pi ** 2)
FACTOR_RTOL = 1e-13
DENSE_RHS_MAX_N = 500

# reference ratios (measured relative error) / (certified bound), k = 1..5
TABLE1 = {
    10: (0.085557058, 0.008182140, 0.000662944, 0.000046905, 0.000002980),
    100: (0.098737674, 0.010548343, 0.000938914, 0.000071019, 0.000004667),
    1000: (0.099677737, 0.010746601, 0.000965172, 0.000073639, 0.000004879),
}


@dataclass
class PideProblem:
    """Grid size, kernel coefficient ``a(t)`` and forcing ``f(x, y)``.

    Both callables must accept numpy arrays.  ``a_max`` defaults to the
    maximum of ``|a|`` over the grid and a 10x refined sampling of [0, 1].
    """

    n: int
    a_fn: object
    f_fn: object
    a_max: float = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"grid size must be a positive integer, got {self.n}")
        self.n = int(self.n)
        if self.a_max is None:
            fine = np.linspace(0.0, 1.0, 10 * (self.n + 1) + 1)
            grid = np.arange(1, self.n + 1) / (self.n + 1)
            samples = np.abs(np.concatenate([np.atleast_1d(self.a_fn(fine)),
                                             np.atleast_1d(self.a_fn(grid))]))
            self.a_max = float(samples.max())

    @property
    def grid(self):
        return np.arange(1, self.n + 1) / (self.n + 1)


class SemiseparableOperator:
    """``scale * S`` with ``S`` lower triangular and constant strictly-lower columns.

    ``S[i, i] = diag[i]`` and ``S[i, j] = lower[j]`` for ``i > j``.  Products
    and shifted solves (plain or transposed) cost O(n) per column through
    running prefix/suffix sums.
    """

    def __init__(self, diag, lower, scale=1.0, counter=None):
        self.diag = np.asarray(diag, dtype=float)
        self.lower = np.asarray(lower, dtype=float)
        if self.lower.shape != self.diag.shape:
            raise DomainError("diag and lower must have the same length")
        self.scale = float(scale)
        self.shape = (self.diag.size, self.diag.size)
        self.counter = counter

    def _count(self, ops):
        if self.counter is not None:
            self.counter["flops"] = self.counter.get("flops", 0) + ops

    def apply(self, x, transpose=False):
        x = np.asarray(x, dtype=float)
        vector = x.ndim == 1
        if vector:
            x = x[:, None]
        d = self.diag[:, None]
        v = self.lower[:, None]
        if not transpose:
            prefix = np.cumsum(v * x, axis=0)
            y = d * x
            y[1:] += prefix[:-1]
        else:
            suffix = np.cumsum(x[::-1], axis=0)[::-1]
            y = d * x
            y[:-1] += v[:-1] * suffix[1:]
        y *= self.scale
        self._count(4 * x.size)
        return y[:, 0] if vector else y

    def solve(self, shift, rhs, transpose=False):
        return semiseparable_solve((self.diag, self.lower), self.scale, shift, rhs,
                                   transpose=transpose, counter=self.counter)

    def dense(self):
        n = self.diag.size
        s = np.tril(np.broadcast_to(self.lower, (n, n)), -1) + np.diag(self.diag)
        return self.scale * s


def semiseparable_solve(s_struct, scale, shift, rhs, transpose=False, counter=None):
    """Solve ``(scale * S - shift I) x = rhs`` (or with ``S^T``) in O(n) per column.

    ``s_struct`` is the pair ``(diag, lower)`` describing ``S`` as in
    :class:`SemiseparableOperator`.  Forward substitution carries the
    running sum ``sum_{j<i} lower[j] x_j``; the transposed system is solved
    backwards with the suffix sum of ``x``.
    """
    diag, lower = (np.asarray(s, dtype=float) for s in s_struct)
    n = diag.size
    b = np.asarray(rhs, dtype=float)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if b.shape[0] != n:
        raise DomainError(f"rhs has {b.shape[0]} rows, expected {n}")
    pivots = scale * diag - shift
    tol = 1e-13 * max(np.abs(pivots).max(), abs(scale) * np.abs(lower).max(initial=0.0))
    bad = np.flatnonzero(np.abs(pivots) <= tol)
    if bad.size:
        raise SingularMatrixError(f"zero pivot at row {int(bad[0])} of shifted semiseparable "
                                  "system", pivot=int(bad[0]))
    v = scale * lower
    x = np.empty_like(b)
    acc = np.zeros(b.shape[1])
    if not transpose:
        for i in range(n):
            x[i] = (b[i] - acc) / pivots[i]
            acc += v[i] * x[i]
    else:
        for i in range(n - 1, -1, -1):
            x[i] = (b[i] - v[i] * acc) / pivots[i]
            acc += x[i]
    if counter is not None:
        counter["flops"] = counter.get("flops", 0) + 4 * n * b.shape[1] + n
    return x[:, 0] if vector else x


@dataclass
class PideDiscretization:
    n: int
    a_values: np.ndarray
    s_diag: np.ndarray
    s_lower: np.ndarray
    t_diag: np.ndarray
    t_off: np.ndarray
    scale_a: float
    scale_b: float
    grid: np.ndarray
    f_fn: object = field(repr=False)

    def a_operator(self, divide_by=1.0, counter=None):
        return SemiseparableOperator(self.s_diag, self.s_lower, self.scale_a / divide_by,
                                     counter=counter)

    def b_operator(self, divide_by=1.0, counter=None):
        c = self.scale_b / divide_by
        return TridiagonalOperator(-c * self.t_diag, -c * self.t_off, -c * self.t_off,
                                   counter=counter)

    def a_dense(self):
        return self.a_operator().dense()

    def b_dense(self):
        return self.b_operator().dense()

    def s_dense(self):
        return SemiseparableOperator(self.s_diag, self.s_lower).dense()

    def t_dense(self):
        return np.diag(self.t_diag) + np.diag(self.t_off, 1) + np.diag(self.t_off, -1)

    def rhs_dense(self):
        x, y = np.meshgrid(self.grid, self.grid, indexing="ij")
        return np.asarray(self.f_fn(x, y), dtype=float) * np.ones_like(x)


def discretize(p):
    """Trapezoid/centered-difference discretization of a :class:`PideProblem`."""
    if p.a_max > A_MAX_LIMIT:
        raise HypothesisError(f"a_max = {p.a_max} exceeds {A_MAX_LIMIT}; "
                              "uniqueness of the discrete solution is not guaranteed")
    n = p.n
    grid = p.grid
    a_vals = np.asarray(p.a_fn(grid), dtype=float) * np.ones(n)
    lower = a_vals.copy()
    lower[0] = 0.5 * a_vals[0]
    return PideDiscretization(
        n=n,
        a_values=a_vals,
        s_diag=0.5 * a_vals,
        s_lower=lower,
        t_diag=np.full(n, -2.0),
        t_off=np.ones(n - 1),
        scale_a=1.0 / (n + 1),
        scale_b=float((n + 1) ** 2),
        grid=grid,
        f_fn=p.f_fn,
    )


def s_prime_norm(n):
    """Spectral norm of the n x n lower-triangular all-ones matrix, ``1/(2 sin(pi/(4n+2)))``."""
    if int(n) != n or n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    return 1.0 / (2.0 * math.sin(math.pi / (4 * n + 2)))


def b_eigenvalues(n):
    """Eigenvalues ``4 (n+1)^2 sin^2(k pi / (2(n+1)))`` of ``B``, ascending."""
    k = np.arange(1, n + 1)
    return 4.0 * (n + 1) ** 2 * np.sin(k * np.pi / (2 * (n + 1))) ** 2


def spectral_window(n, a_max):
    """Interval ``[a, b]`` holding the spectrum of ``B / a_max``."""
    if not a_max > 0.0:
        raise DomainError(f"a_max must be positive, got {a_max}")
    lam = 4.0 * (n + 1) ** 2
    a = lam * math.sin(math.pi / (2 * (n + 1))) ** 2 / a_max
    b = lam * math.sin(n * math.pi / (2 * (n + 1))) ** 2 / a_max
    return a, b


def _contraction_ratio(a, b):
    return (b / a - 1.0) / (a + b - 2.0 / a)


def error_bound(k, a, b):
    """Certified relative error ``(1 + sqrt2/(a-1)) ((b/a - 1)/(a + b - 2/a))^k`` after k steps."""
    return (1.0 + math.sqrt(2.0) / (a - 1.0)) * _contraction_ratio(a, b) ** k


def iterations_required(epsilon, a, b, use_simple=False, a_max=None):
    """Number of fADI steps certifying relative error ``epsilon``.

    The default uses the exact window ``[a, b]``; ``use_simple`` uses the
    ``n``-independent form with ratio ``pi^2 a_max / 16`` (requires
    ``a_max <= sqrt(8 + 32/pi^2)``).  At least one step is always taken.
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    if use_simple:
        if a_max is None or not 0.0 < a_max <= SIMPLE_A_MAX_LIMIT:
            raise DomainError(f"simple form needs 0 < a_max <= {SIMPLE_A_MAX_LIMIT:.6f}")
        lead = 1.0 + math.sqrt(2.0) * a_max / (4.0 - a_max)
        ratio = math.pi ** 2 * a_max / 16.0
    else:
        if not 1.0 < a < b:
            raise DomainError(f"need 1 < a < b, got a={a}, b={b}")
        lead = 1.0 + math.sqrt(2.0) / (a - 1.0)
        ratio = _contraction_ratio(a, b)
    if not 0.0 < ratio < 1.0:
        raise HypothesisError(f"contraction ratio {ratio} >= 1: the bound certifies nothing")
    return max(1, math.ceil(math.log(epsilon / lead) / math.log(ratio)))


def cross_approximation(row_fn, col_fn, n_rows, n_cols, rtol=FACTOR_RTOL, max_rank=64):
    """Adaptive cross approximation with partial pivoting.

    ``row_fn(i)`` and ``col_fn(j)`` return full rows/columns of an
    implicitly given matrix; only O((m + n) r) entries are touched.
    Returns ``(f, g)`` with ``M ~= f @ g.T``.
    """
    us, vs = [], []
    used_rows = set()
    i = 0
    norm2 = 0.0
    for _ in range(max_rank):
        row = np.asarray(row_fn(i), dtype=float).copy()
        for u, v in zip(us, vs):
            row -= u[i] * v
        used_rows.add(i)
        j = int(np.argmax(np.abs(row)))
        if row[j] == 0.0:
            cand = [r for r in range(n_rows) if r not in used_rows]
            if not cand:
                break
            i = cand[0]
            continue
        col = np.asarray(col_fn(j), dtype=float).copy()
        for u, v in zip(us, vs):
            col -= v[j] * u
        u = col / row[j]
        v = row
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        cross = sum(float((u @ uu) * (v @ vv)) for uu, vv in zip(us, vs))
        norm2 += 2.0 * cross + (nu * nv) ** 2
        us.append(u)
        vs.append(v)
        if nu * nv <= rtol * math.sqrt(max(norm2, 0.0)):
            break
        masked = np.abs(u)
        masked[list(used_rows)] = -1.0
        i = int(np.argmax(masked))
        if masked[i] < 0.0:
            break
    if not us:
        return np.zeros((n_rows, 0)), np.zeros((n_cols, 0))
    return np.column_stack(us), np.column_stack(vs)


def _truncate_factors(f, g, rtol):
    if f.shape[1] == 0:
        return f, g
    qf, rf = np.linalg.qr(f)
    qg, rg = np.linalg.qr(g)
    u, s, vt = np.linalg.svd(rf @ rg.T)
    if s[0] == 0.0:
        return f[:, :0], g[:, :0]
    r = int(np.count_nonzero(s > rtol * s[0]))
    return qf @ (u[:, :r] * s[:r]), qg @ vt[:r].T


def factor_rhs(disc, rtol=FACTOR_RTOL):
    """Low-rank factors ``F ~= f @ g.T`` of the sampled forcing.

    Dense truncated SVD for ``n <= 500``; beyond that, cross approximation
    on rows/columns of ``f`` followed by the same truncation, so the dense
    ``F`` is never formed.
    """
    n = disc.n
    if n <= DENSE_RHS_MAX_N:
        u, s, vt = np.linalg.svd(disc.rhs_dense(), full_matrices=False)
        if s[0] == 0.0:
            return np.zeros((n, 0)), np.zeros((n, 0))
        r = int(np.count_nonzero(s > rtol * s[0]))
        return u[:, :r] * s[:r], vt[:r].T
    grid = disc.grid

    def row(i):
        return np.asarray(disc.f_fn(np.full(n, grid[i]), grid), dtype=float) * np.ones(n)

    def col(j):
        return np.asarray(disc.f_fn(grid, np.full(n, grid[j])), dtype=float) * np.ones(n)

    f, g = cross_approximation(row, col, n, n, rtol=rtol * 1e-2)
    return _truncate_factors(f, g, rtol)


@dataclass
class PideSolution:
    """fADI solution in factored form plus the quantities that certify it."""

    u: FactoredPair
    report: object
    a: float
    b: float
    a_max: float
    iterations: int
    certified_error: float

    def dense(self):
        return self.u.to_dense()


def solve_pide(p, epsilon=1e-7, iterations=None, use_simple=False, reference=None,
               track_residual=True, counter=None):
    """Solve the discretized PIDE by fADI with the fixed shift pair.

    The equation is divided by ``a_max`` so that ``||A'|| <= 1`` and the
    spectrum of ``B'`` lies in :func:`spectral_window`.  Unless
    ``iterations`` is given, the step count comes from
    :func:`iterations_required` for ``epsilon``.  ``A'`` solves use the
    semiseparable forward substitution, ``B'`` solves the Thomas algorithm.
    """
    disc = discretize(p)
    n, a_max = p.n, p.a_max
    f, g = factor_rhs(disc)
    if f.shape[1] == 0:
        pair = FactoredPair(np.zeros((n, 0)), np.zeros((n, 0)))
        return PideSolution(pair, ConvergenceReport(), math.nan, math.nan, a_max, 0, 0.0)
    if a_max == 0.0:
        # A = 0 leaves -U B = F; B is symmetric, so U = f (-B^{-1} g)^T exactly
        bop = disc.b_operator(counter=counter)
        pair = FactoredPair(f, -bop.solve(0.0, g))
        return PideSolution(pair, ConvergenceReport(), math.nan, math.nan, 0.0, 0, 0.0)
    a, b = spectral_window(n, a_max)
    if n == 1:
        b = a * (1.0 + 1e-12)
    if iterations is None:
        iterations = iterations_required(epsilon, a, b, use_simple=use_simple, a_max=a_max)
    shifts = fixed_shift_schedule(a, b, iterations)
    aop = disc.a_operator(divide_by=a_max, counter=counter)
    bop = disc.b_operator(divide_by=a_max, counter=counter)
    pair, report = fadi(aop, bop, f / a_max, g, shifts,
                        bound=lambda k: error_bound(k, a, b), reference=reference,
                        track_residual=track_residual)
    return PideSolution(pair, report, a, b, a_max, iterations,
                        error_bound(iterations, a, b))


def reference_solution(p):
    """Discrete solution used to measure iteration errors.

    Kronecker solve when ``n^2 <= 4096``; otherwise fADI run well past
    machine precision of the certified bound (returned in factored form).
    """
    disc = discretize(p)
    n = p.n
    if n * n <= KRON_MAX_UNKNOWNS:
        return solve_kron(disc.a_dense(), disc.b_dense(), disc.rhs_dense())
    a, b = spectral_window(n, p.a_max)
    steps = iterations_required(1e-20, a, b) + 5
    return solve_pide(p, iterations=steps, track_residual=False).u


def worked_example(n):
    """``a(t) = t``, ``f = 6x^4 y(1-2y) + x^6 y^3 (1-y)/6``; exact ``u = x^4 y^3 (1-y)``."""
    return PideProblem(
        n,
        lambda t: np.asarray(t, dtype=float),
        lambda x, y: 6 * x ** 4 * y * (1 - 2 * y) + x ** 6 * y ** 3 * (1 - y) / 6,
    )


def exact_worked_solution(x, y):
    return x ** 4 * y ** 3 * (1 - y)


def table1(n_list=(10, 100, 1000), k_max=5, norm="spectral"):
    """Ratios of measured relative error to the certified bound for the worked example.

    Returns rows ``(n, k, rel_error, bound, ratio)``.  ``norm`` selects the
    spectral (default) or Frobenius norm for the measured error.
    """
    rows = []
    for n in n_list:
        p = worked_example(n)
        ref = reference_solution(p)
        if norm == "spectral":
            sol = solve_pide(p, iterations=k_max, reference=ref, track_residual=False)
            errors = sol.report.errors
        elif norm == "frobenius":
            sol = solve_pide(p, iterations=k_max, track_residual=False)
            ref_dense = ref.to_dense() if isinstance(ref, FactoredPair) else ref
            errors = []
            for k in range(1, k_max + 1):
                sk = solve_pide(p, iterations=k, track_residual=False)
                errors.append(np.linalg.norm(sk.dense() - ref_dense) / np.linalg.norm(ref_dense))
        else:
            raise ValidationError(f"unknown norm {norm!r}")
        for k, err in enumerate(errors, start=1):
            bound = error_bound(k, sol.a, sol.b)
            rows.append((n, k, err, bound, err / bound))
    return rows
