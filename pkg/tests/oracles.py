"""Independent reference constructions used by the tests.

Nothing here calls the library's closed forms: extremal rationals come from
Jacobi elliptic functions in scipy, and norms from dense LAPACK.
"""
import numpy as np
from scipy.special import ellipj, ellipk


def symmetric_zolotarev_rational(k, ell):
    """Extremal degree-k rational for ``[-1, -ell]`` against ``[ell, 1]``.

    Returns zeros ``p`` of ``R(x) = prod (x - p_j)/(x + p_j)`` (small on
    ``[ell, 1]``) and ``M = max_{[ell,1]} |R|``; the Zolotarev number is ``M^2``.
    """
    kp2 = 1.0 - ell * ell
    big_k = ellipk(kp2)
    u = (2 * np.arange(1, k + 1) - 1) * big_k / (2 * k)
    _, _, dn, _ = ellipj(u, kp2)
    p = dn
    x = np.linspace(ell, 1.0, 20001)
    m = np.max(np.abs(rational_from_zeros(p, x)))
    return p, m


def rational_from_zeros(p, x):
    x = np.asarray(x)
    r = np.ones_like(x, dtype=np.result_type(x, float))
    for pj in p:
        r = r * (x - pj) / (x + pj)
    return r


def ell_from_gamma(gamma):
    """``ell`` with ``(1 + ell)^2 / (4 ell) = gamma``, ``0 < ell < 1``."""
    return 2 * gamma - 1 - 2 * np.sqrt(gamma * gamma - gamma)


def mobius_to_standard(z1, z2, z3):
    """Coefficients of the map sending ``z1, z2, z3`` to ``0, 1, inf``."""
    return np.array([[z2 - z3, -z1 * (z2 - z3)], [z2 - z1, -z3 * (z2 - z1)]], dtype=complex)


def mobius_through(src, dst):
    """2x2 coefficient matrix of the Moebius map with ``src[i] -> dst[i]`` (three points)."""
    return np.linalg.inv(mobius_to_standard(*dst)) @ mobius_to_standard(*src)


def apply_mobius_matrix(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def interval_pair_ratio(k, e, f, npts=20001):
    """Grid sup/inf ratio of the transplanted extremal rational for real intervals ``e``, ``f``.

    ``e`` and ``f`` are ``(lo, hi)`` tuples with ``e`` left of ``f``.
    """
    gamma = abs((f[0] - e[0]) * (f[1] - e[1]) / ((f[1] - e[0]) * (f[0] - e[1])))
    ell = ell_from_gamma(gamma)
    p, _ = symmetric_zolotarev_rational(k, ell)
    s = mobius_through((e[0], e[1], f[0]), (-1.0, -ell, ell))
    xe = np.linspace(e[0], e[1], npts)
    xf = np.linspace(f[0], f[1], npts)
    re = np.abs(rational_from_zeros(p, apply_mobius_matrix(s, xe)))
    rf = np.abs(rational_from_zeros(p, apply_mobius_matrix(s, xf)))
    return rf.max() / re.min()


def circle_certifying_ratio(k, a, b, alpha, npts=10000):
    """Grid ratio ``sup_{[a,b]} |r| / inf_{|z|=1} |r|`` of the degree-2k certifying rational.

    ``r = R o S o phi`` with ``phi(z) = 1/(alpha - ((1+z)/(1-z))^2)`` taking
    the circle into ``[0, 1/alpha]`` and ``[a, b]`` into the second reduced
    interval, ``S`` the Moebius map onto the symmetric configuration and
    ``R`` the extremal rational there.
    """
    c = (1 + a) / (1 - a)
    d = (1 + b) / (1 - b)
    e = (0.0, 1.0 / alpha)
    f = (1.0 / (alpha - d * d), 1.0 / (alpha - c * c))
    gamma = abs((f[0] - e[0]) * (f[1] - e[1]) / ((f[1] - e[0]) * (f[0] - e[1])))
    ell = ell_from_gamma(gamma)
    p, _ = symmetric_zolotarev_rational(k, ell)
    s = mobius_through((e[0], e[1], f[0]), (-1.0, -ell, ell))

    def r(z):
        w = (1 + z) / (1 - z)
        return np.abs(rational_from_zeros(p, apply_mobius_matrix(s, 1.0 / (alpha - w * w))))

    theta = 2 * np.pi * (np.arange(npts) + 0.5) / npts
    on_circle = r(np.exp(1j * theta))
    on_interval = r(np.linspace(a, b, npts).astype(complex))
    return on_interval.max() / on_circle.min()


def simple_certifying_ratio(k, a, b, npts=10000):
    w = 0.5 * (a + b)
    theta = 2 * np.pi * (np.arange(npts) + 0.5) / npts
    z = np.exp(1j * theta)
    x = np.linspace(a, b, npts)
    on_interval = np.abs((x - w) / (x - 1 / w)) ** k
    on_circle = np.abs((z - w) / (z - 1 / w)) ** k
    return on_interval.max() / on_circle.min()


def random_contraction(rng, n, kind="mix"):
    """Random ``A`` with ``||A||_2 = 1``: orthogonal, normalized Gaussian, or ``Q diag(s) V``."""
    if kind == "orthogonal":
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        return q
    if kind == "scaled":
        g = rng.standard_normal((n, n))
        return g / np.linalg.norm(g, 2)
    q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
    q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
    s = rng.uniform(0.0, 1.0, n)
    s[0] = 1.0
    return (q1 * s) @ q2


def random_symmetric_in(rng, n, a, b):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = rng.uniform(a, b, n)
    lam[0], lam[-1] = a, b
    m = (q * lam) @ q.T
    return 0.5 * (m + m.T)
