"""Dense real matrix helpers shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  The
factorizations delegate to LAPACK through numpy/scipy; the structured
tridiagonal solver is written out because its O(n) cost is the point.
"""
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, NotPSDError, SingularMatrixError

__all__ = [
    "as_matrix",
    "SvdResult",
    "svd",
    "singular_values",
    "numerical_rank",
    "operator_norm",
    "sym_eig",
    "psd_sqrt",
    "solve_dense",
    "thomas_solve",
    "lowrank_factors_norm",
]


def as_matrix(m, name="matrix"):
    """Return ``m`` as a 2-D float64 array, rejecting NaN/Inf.

    Scalars become 1x1 and 1-D input becomes a column.
    """
    arr = np.asarray(m, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    elif arr.ndim != 2:
        raise DimensionError(f"{name} must be at most 2-D, got {arr.ndim}-D")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} has non-finite entries")
    return arr


def _require_nonempty(m, name):
    if m.size == 0:
        raise DimensionError(f"{name} is empty")


def _require_square(m, name):
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got {m.shape}")


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``m = u @ diag(singular_values) @ v.T``."""

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def rank(self, rtol=1e-12):
        return _rank_from_values(self.singular_values, rtol)

    def reconstruct(self):
        return (self.u * self.singular_values) @ self.v.T

    def truncate(self, r):
        return SvdResult(self.u[:, :r], self.singular_values[:r], self.v[:, :r])


def svd(m):
    """Thin singular value decomposition, singular values non-increasing."""
    m = as_matrix(m)
    _require_nonempty(m, "matrix")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return SvdResult(u, s, vt.T)


def singular_values(m):
    m = as_matrix(m)
    _require_nonempty(m, "matrix")
    return np.linalg.svd(m, compute_uv=False)


def _rank_from_values(s, rtol):
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def numerical_rank(m, rtol=1e-12):
    """Number of singular values above ``rtol * s_1``."""
    return _rank_from_values(singular_values(m), rtol)


def operator_norm(m):
    """Spectral norm (largest singular value)."""
    return float(singular_values(m)[0])


def sym_eig(m, sym_tol=1e-10):
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending."""
    m = as_matrix(m)
    _require_nonempty(m, "matrix")
    _require_square(m, "matrix")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > sym_tol * scale:
        raise DimensionError("matrix is not symmetric to tolerance")
    return np.linalg.eigh(0.5 * (m + m.T))


def psd_sqrt(m, tol=1e-10):
    """Symmetric square root of a positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are treated as rounding noise and clamped
    to zero; anything more negative raises :class:`NotPSDError`.
    """
    w, q = sym_eig(m, sym_tol=tol)
    if w[0] < -tol:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e} < -{tol:g}")
    root = np.sqrt(np.clip(w, 0.0, None))
    r = (q * root) @ q.T
    return 0.5 * (r + r.T)


def solve_dense(a, rhs, pivot_rtol=1e-13):
    """Solve ``a @ x = rhs`` by LU with partial pivoting.

    Raises :class:`SingularMatrixError` (carrying the offending pivot index)
    when a pivot is smaller than ``pivot_rtol * max|a|``.
    """
    a = as_matrix(a, "a")
    _require_nonempty(a, "a")
    _require_square(a, "a")
    rhs_arr = np.asarray(rhs, dtype=float)
    vector = rhs_arr.ndim == 1
    rhs2 = as_matrix(rhs_arr, "rhs")
    if rhs2.shape[0] != a.shape[0]:
        raise DimensionError(f"rhs has {rhs2.shape[0]} rows, expected {a.shape[0]}")
    lu, piv = _checked_lu(a, pivot_rtol)
    x = sla.lu_solve((lu, piv), rhs2)
    return x.ravel() if vector else x


def _checked_lu(a, pivot_rtol=1e-13):
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    thresh = pivot_rtol * float(np.abs(a).max())
    small = np.flatnonzero(np.abs(np.diag(lu)) <= thresh)
    if small.size:
        j = int(small[0])
        raise SingularMatrixError(f"matrix is singular to tolerance at pivot {j}", pivot=j)
    return lu, piv


def thomas_solve(diag, sub, sup, shift, rhs, counter=None, pivot_atol=None):
    """Solve ``(tri(sub, diag, sup) - shift*I) x = rhs`` in O(n) per column.

    Parameters
    ----------
    diag : (n,) array
        Main diagonal.
    sub, sup : (n-1,) arrays
        Sub- and super-diagonal.
    shift : float
        Subtracted from the main diagonal.
    rhs : (n,) or (n, p) array
        Right-hand side(s); all columns are swept together.
    counter : dict, optional
        If given, ``counter["flops"]`` is incremented by the number of
        scalar multiply/divide/subtract operations performed.
    pivot_atol : float, optional
        Pivots at or below this magnitude raise; defaults to
        ``1e-13 * max|entries|``.

    Notes
    -----
    No pivoting is done, so the system should be diagonally dominant or
    otherwise known to be safe for Gaussian elimination without row swaps.
    """
    d = np.asarray(diag, dtype=float)
    lo = np.asarray(sub, dtype=float)
    up = np.asarray(sup, dtype=float)
    n = d.shape[0]
    if lo.shape != (n - 1,) or up.shape != (n - 1,):
        raise DimensionError("sub/sup diagonals must have length n-1")
    b = np.asarray(rhs, dtype=float)
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    if b.shape[0] != n:
        raise DimensionError(f"rhs has {b.shape[0]} rows, expected {n}")
    if pivot_atol is None:
        scale = max(np.abs(d - shift).max(initial=0.0), np.abs(lo).max(initial=0.0),
                    np.abs(up).max(initial=0.0))
        pivot_atol = 1e-13 * scale

    cp = np.empty(max(n - 1, 0))
    dp = np.empty_like(b)
    piv = d[0] - shift
    if abs(piv) <= pivot_atol:
        raise SingularMatrixError("zero pivot in tridiagonal sweep at row 0", pivot=0)
    if n > 1:
        cp[0] = up[0] / piv
    dp[0] = b[0] / piv
    for i in range(1, n):
        piv = (d[i] - shift) - lo[i - 1] * cp[i - 1]
        if abs(piv) <= pivot_atol:
            raise SingularMatrixError(f"zero pivot in tridiagonal sweep at row {i}", pivot=i)
        if i < n - 1:
            cp[i] = up[i] / piv
        dp[i] = (b[i] - lo[i - 1] * dp[i - 1]) / piv
    x = dp
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    if counter is not None:
        p = b.shape[1]
        counter["flops"] = counter.get("flops", 0) + 5 * n + 5 * n * p
    return x[:, 0] if vector else x


def lowrank_factors_norm(left, right, compute_rank=False, rtol=1e-12):
    """Spectral norm of ``left @ right.T`` without forming the product.

    Both factors are reduced by QR, so the cost is O((m + n) p^2) for
    p columns.  With ``compute_rank`` the numerical rank is returned too.
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    if left.shape[1] == 0:
        return (0.0, 0) if compute_rank else 0.0
    _, rl = np.linalg.qr(left)
    _, rr = np.linalg.qr(right)
    s = np.linalg.svd(rl @ rr.T, compute_uv=False)
    if compute_rank:
        return float(s[0]), _rank_from_values(s, rtol)
    return float(s[0])
