"""Zolotarev numbers for real interval pairs and for an interval against the
unit circle.

``Z_k(E, F)`` is the infimum over degree-k rationals ``r`` of
``sup_E |r| / inf_F |r|``.  For two disjoint real intervals it has a closed
form in terms of complete elliptic integrals; for ``E = [a, b]`` with
``a > 1`` against the unit circle only upper bounds are available, and
three of them are provided here.
"""
import math
from dataclasses import dataclass

from .errors import DomainError, SeparationError, ValidationError

__all__ = [
    "Interval",
    "CircleIntervalConfig",
    "ZolotarevEstimate",
    "elliptic_k",
    "cross_ratio_gamma",
    "z_exact_intervals",
    "z_upper_intervals",
    "circle_reduction",
    "z_circle_bound_theorem",
    "z_circle_bound_corollary",
    "z_circle_bound_simple",
    "simple_ratio",
    "mobius_apply",
]

_AGM_RTOL = 1e-15
_PRODUCT_TOL = 1e-16
_PRODUCT_CAP = 1000


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise DomainError("interval endpoints must not be NaN")
        if not math.isfinite(self.lo):
            raise DomainError("interval lower endpoint must be finite")
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    def disjoint(self, other):
        return self.hi < other.lo or other.hi < self.lo


@dataclass(frozen=True)
class CircleIntervalConfig:
    """An interval ``[a, b]`` with ``1 < a < b`` paired with the unit circle."""

    interval: Interval

    def __post_init__(self):
        if not (1.0 < self.interval.lo < self.interval.hi < math.inf):
            raise DomainError(f"need 1 < a < b < inf, got {self.interval}")

    @classmethod
    def from_endpoints(cls, a, b):
        return cls(Interval(float(a), float(b)))

    @property
    def a(self):
        return self.interval.lo

    @property
    def b(self):
        return self.interval.hi


@dataclass(frozen=True)
class ZolotarevEstimate:
    k: int
    value: float
    kind: str
    alpha: float = None  # reduction parameter, when one was chosen


def _check_degree(k, minimum=0):
    if int(k) != k or k < minimum:
        raise ValidationError(f"degree must be an integer >= {minimum}, got {k}")
    return int(k)


def _agm(x, y):
    while abs(x - y) > _AGM_RTOL * x:
        x, y = 0.5 * (x + y), math.sqrt(x * y)
    return 0.5 * (x + y)


def _k_from_complement(kprime):
    # K in terms of the complementary modulus sqrt(1 - k^2), which keeps
    # full precision when k is close to 1.
    return math.pi / (2.0 * _agm(1.0, kprime))


def elliptic_k(modulus):
    """Complete elliptic integral of the first kind, ``K(k)``.

    The argument is the modulus ``k`` (not the parameter ``m = k**2``);
    evaluated as ``pi / (2 AGM(1, sqrt(1 - k^2)))``.
    """
    k = float(modulus)
    if not (0.0 <= k < 1.0):
        raise DomainError(f"elliptic modulus must lie in [0, 1), got {modulus}")
    return _k_from_complement(math.sqrt((1.0 - k) * (1.0 + k)))


def cross_ratio_gamma(e, f):
    """``|(c-a)(d-b) / ((d-a)(c-b))|`` for ``E=[a,b]``, ``F=[c,d]`` (always > 1)."""
    if not e.disjoint(f):
        raise SeparationError(f"intervals {e} and {f} are not disjoint")
    a, b, c, d = e.lo, e.hi, f.lo, f.hi
    if math.isinf(d) or math.isinf(b):
        # limit d -> inf (or b -> inf) of the cross-ratio
        if math.isinf(d) and math.isinf(b):
            raise DomainError("at most one interval may be half-infinite")
        if math.isinf(d):
            return abs((c - a) / (c - b))
        return abs((c - a) / (d - a))
    return abs((c - a) * (d - b) / ((d - a) * (c - b)))


def _log_rho(gamma):
    sq = math.sqrt(gamma * gamma - gamma)
    alpha = -1.0 + 2.0 * gamma + 2.0 * sq
    inv = 1.0 / alpha
    # K(1/alpha) / K(sqrt(1 - alpha^-2)); complements are swapped on purpose
    k_num = _k_from_complement(math.sqrt((1.0 - inv) * (1.0 + inv)))
    k_den = _k_from_complement(inv)
    return math.pi * k_num / k_den


def z_exact_intervals(k, e, f):
    """Exact Zolotarev number ``Z_k(E, F)`` of two disjoint real intervals.

    Uses ``4 rho^{-2k} prod_n ((1 + q^{2n}) / (1 + q^{2n-1}))^4`` with
    ``q = rho^{-4k}``; the product stops once a factor is within 1e-16
    of one.
    """
    k = _check_degree(k, minimum=1)
    gamma = cross_ratio_gamma(e, f)
    log_rho = _log_rho(gamma)
    log_q = -4.0 * k * log_rho
    prod = 1.0
    for n in range(1, _PRODUCT_CAP + 1):
        num = 1.0 + math.exp(2 * n * log_q)
        den = 1.0 + math.exp((2 * n - 1) * log_q)
        factor = (num / den) ** 4
        prod *= factor
        if abs(factor - 1.0) < _PRODUCT_TOL:
            break
    value = 4.0 * math.exp(-2.0 * k * log_rho) * prod
    return ZolotarevEstimate(k, value, "exact-product")


def z_upper_intervals(k, gamma):
    """``4 exp(-k pi^2 / ln(16 gamma))``, an upper bound on ``Z_k`` of two intervals."""
    k = _check_degree(k)
    if not gamma > 1.0:
        raise DomainError(f"cross-ratio gamma must exceed 1, got {gamma}")
    return 4.0 * math.exp(-k * math.pi ** 2 / math.log(16.0 * gamma))


def _circle_images(cfg):
    a, b = cfg.a, cfg.b
    return (1.0 + a) / (1.0 - a), (1.0 + b) / (1.0 - b)


def circle_reduction(cfg, alpha):
    """Interval pair whose degree-k Zolotarev number bounds ``Z_2k([a,b], circle)``.

    Returns ``([0, 1/alpha], [1/(alpha - d^2), 1/(alpha - c^2)])`` with
    ``c = (1+a)/(1-a)`` and ``d = (1+b)/(1-b)``; requires ``alpha > c^2``.
    """
    c, d = _circle_images(cfg)
    if not alpha > c * c:
        raise DomainError(f"alpha must exceed c^2 = {c * c}, got {alpha}")
    return (Interval(0.0, 1.0 / alpha),
            Interval(1.0 / (alpha - d * d), 1.0 / (alpha - c * c)))


def _golden_section(fun, lo, hi, rtol):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    while (hi - lo) > rtol * abs(0.5 * (hi + lo)):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = fun(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def z_circle_bound_theorem(k, cfg, alpha=None):
    """Bound on ``Z_2k([a, b], unit circle)`` via the reduced interval pair.

    By default ``alpha`` is chosen by golden-section search on
    ``(c^2, 100 c^2]``.  The reduction is a Moebius map, so the exact value
    does not depend on ``alpha`` beyond rounding; the search only settles
    on a representative.
    """
    k = _check_degree(k)
    if k == 0:
        return ZolotarevEstimate(0, 1.0, "circle-reduction", alpha)
    c, _ = _circle_images(cfg)
    c2 = c * c

    def value(al):
        e, f = circle_reduction(cfg, al)
        return z_exact_intervals(k, e, f).value

    if alpha is None:
        # open at c^2: start a hair inside so the second interval stays finite
        alpha, best = _golden_section(value, c2 * (1.0 + 1e-9), 100.0 * c2, 1e-6)
    else:
        best = value(alpha)
    return ZolotarevEstimate(2 * k, best, "circle-reduction", alpha)


def _corollary_gamma(cfg):
    a, b = cfg.a, cfg.b
    return ((a + 1.0) * (1.0 - b) / ((1.0 - a) * (b + 1.0))) ** 2


def z_circle_bound_corollary(k, cfg):
    """Closed-form bound ``4 [exp(pi^2 / (2 ln 16 gamma))]^{-2k}`` on ``Z_2k``."""
    k = _check_degree(k)
    return ZolotarevEstimate(2 * k, z_upper_intervals(k, _corollary_gamma(cfg)),
                             "circle-corollary")


def simple_ratio(a, b):
    """``(b/a - 1) / (a + b - 2/a)``: the sup/inf ratio of ``(z-w)/(z-1/w)``, ``w=(a+b)/2``."""
    return (b / a - 1.0) / (a + b - 2.0 / a)


def z_circle_bound_simple(k, cfg):
    """``simple_ratio(a, b)**k``, certified by ``r_1(z)^k`` with ``r_1 = (z-w)/(z-1/w)``.

    Raises :class:`DomainError` when the ratio is not below one, i.e. the
    rational does not certify any decay.
    """
    k = _check_degree(k)
    q = simple_ratio(cfg.a, cfg.b)
    if not q < 1.0:
        raise DomainError(f"simple bound ratio {q} >= 1 certifies no decay")
    return ZolotarevEstimate(k, q ** k, "circle-simple")


def mobius_apply(coeffs, z):
    """Evaluate ``(p z + q) / (r z + s)``; ``complex('inf')`` stands for the point at infinity."""
    p, q, r, s = coeffs
    if p * s - q * r == 0:
        raise DomainError("degenerate Moebius coefficients (ps = qr)")
    z = complex(z)
    if math.isinf(z.real) or math.isinf(z.imag):
        return complex(math.inf) if r == 0 else complex(p / r)
    den = r * z + s
    if den == 0:
        return complex(math.inf)
    return (p * z + q) / den
