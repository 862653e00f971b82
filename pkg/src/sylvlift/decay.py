"""Singular value decay of Sylvester solutions.

Normal coefficients with separated interval spectra force
``s_{l+vk}(X) <= Z_k s_l(X)`` (``v = rank C``).  For a contraction ``A`` and
a symmetric ``B`` with spectrum in ``[a, b]``, ``a > 1``, lifting through
a unitary dilation gives the weaker but normality-free bound of
:func:`fastdecay_bound` on ``s_{l+2vk}(X) / s_l(X)``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .linalg import as_matrix, numerical_rank, singular_values
from .zolotarev import Interval, cross_ratio_gamma, z_upper_intervals

__all__ = [
    "DecayReport",
    "bt_decay_check",
    "fastdecay_bound",
    "fastdecay_check",
    "singvaldil_ratio_bound",
    "RANK_RTOL",
]

RANK_RTOL = 1e-12
# singular values below this multiple of s_1 are rounding noise in a
# float64 solve and are not held to a bound
NOISE_RTOL = 1e-12


@dataclass
class DecayReport:
    """Singular values of ``X`` against a bound curve.

    ``bound_curve`` holds ``(index, bound)`` pairs (1-based index into
    ``singular_values``); ``checks`` holds the individual inequalities as
    ``(k, l, index, measured, allowed)``.
    """

    singular_values: np.ndarray
    bound_curve: list
    parameters: dict
    checks: list = field(default_factory=list)
    violations: int = 0
    worst_slack: float = math.inf
    note: str = ""

    @property
    def passed(self):
        return self.violations == 0


def _interval_of(values, name):
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValidationError(f"{name} must be a nonempty finite sequence")
    return Interval(float(v.min()), float(v.max()))


def bt_decay_check(a_diag, b_diag, c, x, k_max, l_max, rtol=1e-8):
    """Check ``s_{l+vk}(X) <= Z_k s_l(X)`` for diagonal (normal) ``A`` and ``B``.

    ``Z_k`` is the interval upper bound with the cross-ratio of
    ``[min a, max a]`` and ``[min b, max b]``; ``v`` is the numerical rank
    of ``C``.  Singular values below ``1e-12 s_1(X)`` are treated as zero
    for the comparison.
    """
    e = _interval_of(a_diag, "a_diag")
    f = _interval_of(b_diag, "b_diag")
    gamma = cross_ratio_gamma(e, f)
    c = as_matrix(c, "c")
    s = singular_values(as_matrix(x, "x"))
    v = numerical_rank(c, RANK_RTOL) if np.any(c) else 0
    report = DecayReport(s, [], {"E": e, "F": f, "gamma": gamma, "v": v,
                                 "k_max": k_max, "l_max": l_max})
    if s[0] == 0.0:
        report.note = "X = 0: all inequalities hold trivially"
        return report
    if v == 0:
        report.note = "C = 0 with nonzero X: the hypotheses exclude this"
        return report
    floor = NOISE_RTOL * s[0]
    curve = {}
    for k in range(1, k_max + 1):
        z = z_upper_intervals(k, gamma)
        for l in range(1, l_max + 1):
            idx = l + v * k
            if idx > s.size:
                continue
            allowed = z * s[l - 1] * (1.0 + rtol)
            measured = s[idx - 1]
            report.checks.append((k, l, idx, measured, allowed))
            if l == 1:
                curve[idx] = z * s[0]
            if measured > max(allowed, floor):
                report.violations += 1
            report.worst_slack = min(report.worst_slack, max(allowed, floor) - measured)
    report.bound_curve = sorted(curve.items())
    if not report.checks:
        report.note = "no checkable indices (v * k exceeds the dimension)"
    return report


def _corollary_gamma(a, b):
    return ((a + 1.0) * (1.0 - b) / ((1.0 - a) * (b + 1.0))) ** 2


def fastdecay_bound(l, k, v, a, b, norm_x, s_l):
    """Upper bound on ``s_{l+2vk}(X) / s_l(X)`` for ``||A|| = 1`` and symmetric ``B`` in ``[a, b]``.

    ``4 (1 + ||X|| / (s_l (a - 1))) exp(pi^2 / (2 ln 16 gamma))^{-2k}`` with
    ``gamma = ((a+1)(1-b) / ((1-a)(b+1)))^2``.  ``l`` and ``v`` only fix the
    index the bound applies to and do not enter the value.
    """
    if not a > 1.0:
        raise DomainError(f"need a > 1, got {a}")
    if not b > a:
        raise DomainError(f"need b > a, got a={a}, b={b}")
    if not s_l > 0.0:
        raise DomainError("s_l must be positive")
    if k < 0 or l < 1 or v < 0:
        raise DomainError("need k >= 0, l >= 1, v >= 0")
    gamma = _corollary_gamma(a, b)
    return 4.0 * (1.0 + norm_x / (s_l * (a - 1.0))) * math.exp(-k * math.pi ** 2 / math.log(16.0 * gamma))


def fastdecay_check(c, x, a, b, k_max=3, l_max=2, rtol=1e-8):
    """Measure ``s_{l+2vk}(X)/s_l(X)`` against :func:`fastdecay_bound`."""
    c = as_matrix(c, "c")
    s = singular_values(as_matrix(x, "x"))
    v = numerical_rank(c, RANK_RTOL)
    report = DecayReport(s, [], {"a": a, "b": b, "v": v, "k_max": k_max, "l_max": l_max})
    if s[0] == 0.0 or v == 0:
        report.note = "trivial instance"
        return report
    floor = NOISE_RTOL * s[0]
    curve = {}
    for k in range(1, k_max + 1):
        for l in range(1, l_max + 1):
            idx = l + 2 * v * k
            if idx > s.size or s[l - 1] <= floor:
                continue
            allowed = fastdecay_bound(l, k, v, a, b, s[0], s[l - 1]) * s[l - 1] * (1.0 + rtol)
            measured = s[idx - 1]
            report.checks.append((k, l, idx, measured, allowed))
            if l == 1:
                curve[idx] = allowed
            if measured > max(allowed, floor):
                report.violations += 1
            report.worst_slack = min(report.worst_slack, max(allowed, floor) - measured)
    report.bound_curve = sorted(curve.items())
    if not report.checks:
        report.note = "no checkable indices"
    return report


def singvaldil_ratio_bound(s_x, s_z, norm_z_jx, norm_y_z, k, l):
    """Right-hand side of the dilation estimate for ``s_l(X) / s_k(X)``.

    ``(1 + ||Z - J X|| / s_k(X)) (s_l(Z) + ||Y - Z||) / s_k(Z)``, indices
    1-based, where ``Y`` compresses to ``X`` and ``Z`` is any operator on
    the larger space.
    """
    s_x = np.asarray(s_x, dtype=float)
    s_z = np.asarray(s_z, dtype=float)
    if k < 1 or l < 1 or k > s_x.size or k > s_z.size or l > s_z.size:
        raise DomainError("indices out of range")
    if s_x[k - 1] <= 0.0 or s_z[k - 1] <= 0.0:
        raise DomainError("s_k(X) and s_k(Z) must be positive")
    return (1.0 + norm_z_jx / s_x[k - 1]) * (s_z[l - 1] + norm_y_z) / s_z[k - 1]
