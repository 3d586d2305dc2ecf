"""Special functions: incomplete Gaussian transform, Gauss hypergeometric
function on the extended domain, modified beta, and the Mellin identities
used as internal oracles.

gaussian_E and the incomplete gamma route through mpmath's erf/gammainc
(mature implementations of standard functions); the 2F1 evaluation strategy
(series / Pfaff / Gauss / large-argument inversion) is ours because the
series-side zeta evaluations need tight control of the domain and of the
convergence route.
"""
from __future__ import annotations

from mpmath import (mp, mpf, mpc, sqrt, exp, pi, erf, erfc, gamma, gammainc,
                    isint, sign)

from .errors import DomainError, NonConvergent, OutsideDomain

SERIES_RADIUS = mpf("0.7")


def gaussian_E(alpha):
    """E(alpha) = int_0^alpha exp(-pi u^2) du = erf(sqrt(pi) alpha)/2 (entire)."""
    alpha = mpc(alpha) if isinstance(alpha, complex) else alpha
    return erf(sqrt(pi) * alpha) / 2


def _sigma(a):
    """Half-plane selector: a / principal_sqrt(a^2) for a != 0."""
    re = mp.re(a)
    if re > 0:
        return 1
    if re < 0:
        return -1
    return 1 if mp.im(a) >= 0 else -1


def gaussian_E_parts(alpha):
    """(s, tail) with E(alpha) = s/2 - s*erfc(sqrt(pi) s alpha)/2, s = sigma(alpha).

    Splitting the constant part from the erfc tail lets callers multiply each
    by an exponential factor separately; for indefinite theta terms with
    complex cone parameters the endpoint E values can be exponentially large
    while their difference stays O(1), and this split avoids the cancellation.
    """
    if alpha == 0:
        return 0, mpf(0)
    s = _sigma(alpha)
    return s, -s * erfc(sqrt(pi) * s * alpha) / 2


def gaussian_E_r(alpha, r):
    """E_r(alpha) = int_0^alpha |u|^r exp(-pi u^2) du for real alpha, Re(r) > -1.

    Equals sgn(alpha) * lower_gamma((r+1)/2, pi alpha^2) / (2 pi^((r+1)/2)).
    """
    if mp.re(mpc(r)) <= -1:
        raise DomainError("gaussian_E_r requires Re(r) > -1")
    alpha = mpf(alpha)
    if alpha == 0:
        return mpf(0)
    a = (mpc(r) + 1) / 2
    val = gammainc(a, 0, pi * alpha ** 2) / (2 * pi ** a)
    return sign(alpha) * val


def _hyp2f1_series(a, b, c, z, max_terms=None):
    """Power series; caller guarantees |z| <= SERIES_RADIUS (+ margin)."""
    if max_terms is None:
        max_terms = 40 * mp.dps + 200
    term = mpc(1)
    total = mpc(1)
    az = abs(z)
    tol = mpf(10) ** (-(mp.dps + 5))
    for n in range(max_terms):
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if abs(term) < tol * (1 + abs(total)) and n > 4:
            # geometric tail bound: ratio -> |z| < 1
            if az < 1 and abs(term) * az / (1 - az) < tol * (1 + abs(total)):
                return total
    raise NonConvergent("2F1 series did not converge")


def hyp2f1(a, b, c, z):
    """Gauss 2F1(a,b;c;z) on { |z| < 1 } u { Re(z) < 1/2 } u { z = 1 }.

    Series for |z| <= 0.7; Pfaff transform for moderate |z| with Re(z) < 1/2;
    a 1/z inversion for large negative-ish z when the parameter combination
    is nondegenerate; Gauss's theorem at z = 1.
    """
    a, b, c, z = mpc(a), mpc(b), mpc(c), mpc(z)
    if isint(mp.re(c)) and mp.im(c) == 0 and mp.re(c) <= 0:
        raise DomainError("c must not be a non-positive integer")
    if z == 0:
        return mpc(1)
    if z == 1:
        if not (mp.re(c) > mp.re(a + b)):
            raise OutsideDomain("z=1 requires Re(c) > Re(a+b)")
        return gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))
    if abs(z) <= SERIES_RADIUS:
        return _hyp2f1_series(a, b, c, z)
    if not (mp.re(z) < mpf("0.5")):
        raise OutsideDomain(f"z = {z} outside series disc and half-plane")
    # large |z|: connection formula in 1/z converges much faster than Pfaff
    # (whose argument z/(z-1) approaches 1); use it when b - a is not an
    # integer and 1/z is well inside the series disc.
    if abs(z) >= 4 and not _near_int(b - a):
        A = gamma(c) * gamma(b - a) / (gamma(b) * gamma(c - a))
        B = gamma(c) * gamma(a - b) / (gamma(a) * gamma(c - b))
        w = 1 / z
        t1 = A * (-z) ** (-a) * _hyp2f1_series(a, a - c + 1, a - b + 1, w)
        t2 = B * (-z) ** (-b) * _hyp2f1_series(b, b - c + 1, b - a + 1, w)
        return t1 + t2
    w = z / (z - 1)
    if abs(w) >= 1:
        raise OutsideDomain("Pfaff argument not inside unit disc")
    return (1 - z) ** (-b) * _hyp2f1_series(b, c - a, c, w)


def _near_int(x):
    return abs(mp.im(x)) < mpf(10) ** (-mp.dps + 2) and \
        abs(mp.re(x) - mp.nint(mp.re(x))) < mpf(10) ** (-mp.dps + 2)


def mod_beta(x, a, b):
    """Modified beta B~(x; a, b) = int_0^x t^(a-1) (1+t)^(b-1) dt for x > 0,
    Re(a) > 0, via (1/a) x^a 2F1(a, 1-b; a+1; -x)."""
    x = mpf(x)
    a, b = mpc(a), mpc(b)
    if not x > 0:
        raise DomainError("mod_beta requires x > 0")
    if not mp.re(a) > 0:
        raise DomainError("mod_beta requires Re(a) > 0")
    return x ** a / a * hyp2f1(a, 1 - b, a + 1, -x)


def mellin_incomplete_gauss(lam, mu, s):
    """int_0^inf E(sqrt(lam t)) exp(-mu t) t^s dt/t
    = (1/2) pi^(-1/2) mu^(-s) Gamma(s + 1/2) B~(pi lam / mu; 1/2, 1/2 - s)."""
    lam = mpf(lam)
    mu, s = mpc(mu), mpc(s)
    if not lam > 0:
        raise DomainError("lambda must be positive")
    if not mp.re(mu) > 0:
        raise DomainError("Re(mu) must be positive")
    if not mp.re(s) > 0:
        raise DomainError("Re(s) must be positive")
    half = mpf(1) / 2
    return half * pi ** (-half) * mu ** (-s) * gamma(s + half) * \
        mod_beta(pi * lam / mu, half, half - s)


class TestFunction:
    """Selector for the theta test function: 1 or |u|^r with Re(r) > -1."""

    __slots__ = ("kind", "r")

    def __init__(self, kind="one", r=None):
        if kind not in ("one", "abs_pow"):
            raise DomainError(f"unknown test function kind {kind!r}")
        if kind == "abs_pow":
            r = mpc(r)
            if not mp.re(r) > -1:
                raise DomainError("abs_pow requires Re(r) > -1")
        self.kind = kind
        self.r = r

    @classmethod
    def one(cls):
        return cls("one")

    @classmethod
    def abs_pow(cls, r):
        return cls("abs_pow", r)

    @property
    def is_one(self):
        return self.kind == "one"

    def E(self, alpha):
        if self.kind == "one":
            return gaussian_E(alpha)
        return gaussian_E_r(alpha, self.r)

    def __repr__(self):
        return "TestFunction(one)" if self.is_one else f"TestFunction(|u|^{self.r})"
