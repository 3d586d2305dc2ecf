"""Definite and indefinite zeta functions.

The completed indefinite zeta is evaluated through the two-integral analytic
continuation (entire in s):

    zh(s) = int_1^inf Theta^{c1,c2}_{p,q}(t Omega) t^s dt/t
          + e(p^T q)/sqrt(det(-i Omega))
            * int_1^inf Theta^{Obar c1, Obar c2}_{-q,p}(t (-Omega^{-1}))
                  t^{g/2 - s} dt/t.

Both integrals reuse one set of theta-node evaluations across all requested
s values, so functional-equation tests and s-grids cost one theta pass.

The series-side evaluations (incomplete zeta, xi) live in conesum.py; this
module exposes them behind the spec'd operation names.
"""
from __future__ import annotations

import math

import numpy as np
from mpmath import mp, mpf, mpc, exp, pi, gamma, sqrt

from .ctx import PrecisionContext, DEFAULT_CTX
from .errors import (ConeViolation, DivergentRegion, DomainError,
                     NotDefiniteHalfSpace, NotPStable, ValidationError)
from .linalg import CVector, SymMatrix, bilinear, quad_form, signature
from .quadde import MellinIntegral
from .result import EvalResult
from .roots import sqrt_det_definite, sqrt_det_indefinite
from .theta import (DefiniteThetaEngine, ThetaNullEngine, ThetaParams,
                    conv_epsilon, is_p_stable)

LN10 = math.log(10)


def _e(x):
    return exp(2j * pi * x)


# ---- definite zeta --------------------------------------------------------


def definite_zeta(p: CVector, q: CVector, omega: SymMatrix, s,
                  method: str = "dirichlet", bound: int = None,
                  ctx: PrecisionContext = None) -> EvalResult:
    """Completed definite zeta zh_{p,q}(Omega, s).

    method "dirichlet": (2pi)^(-s) Gamma(s) sum_{n != -q} e(p^T(n+q))
    Q_{-iOmega}(n+q)^(-s), truncated at ||m|| <= bound with the tail reported
    in err (the series converges only for Re(s) > g/2 and the tail decays
    polynomially, so err is honest rather than tiny).

    method "mellin": the folded two-integral continuation (entire in s except
    the poles at s = 0 [q integral] and s = g/2 [p integral]).
    """
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        s = mpc(s)
        g = omega.g
        j, k = signature(omega.imag())
        if k != 0:
            raise NotDefiniteHalfSpace(f"Im(Omega) signature ({j},{k})")
        if method == "dirichlet":
            if not mp.re(s) > mpf(g) / 2:
                raise DivergentRegion(
                    f"Dirichlet series needs Re(s) > {g}/2")
            return _definite_dirichlet(p, q, omega, s, bound, ctx)
        if method == "mellin":
            return _definite_mellin(p, q, omega, s, ctx)
        raise ValidationError(f"unknown method {method!r}")


def _definite_dirichlet(p, q, omega, s, bound, ctx):
    g = omega.g
    if bound is None:
        bound = 400 if g == 2 else 4000
    minus_i_om = SymMatrix((mpc(0, -1)) * omega.m, symmetrize=True)
    total = mpc(0)
    import itertools
    rng = [range(-bound, bound + 1)] * g
    sigma = mp.re(s)
    for nn in itertools.product(*rng):
        m = [nn[i] + q[i] for i in range(g)]
        if all(x == 0 for x in m):
            continue
        if sum(float(x) * float(x) for x in m) > bound * bound:
            continue
        Q = quad_form(minus_i_om, CVector(m))
        term = Q ** (-s)
        ph = sum(p[i] * m[i] for i in range(g))
        if ph != 0:
            term *= _e(ph)
        total += term
    E, _ = omega.imag().eigsy()
    lam = min(E) / 2  # Q_half >= lam ||m||^2
    # tail: integral comparison sum_{||m||>R} (lam ||m||^2)^{-sigma}
    R = mpf(bound)
    if 2 * sigma - g <= 0:
        tail = mp.inf
    else:
        tail = 8 * R ** (g - 1) * (lam * R ** 2) ** (-sigma) * R / (2 * sigma - g)
    pref = (2 * pi) ** (-s) * gamma(s)
    return EvalResult(pref * total, abs(pref) * tail,
                      {"terms": (2 * bound + 1) ** g, "radius": bound})


def _definite_mellin(p, q, omega, s, ctx):
    g = omega.g
    q_int = all(abs(q[i] - mp.nint(q[i])) == 0 for i in range(g))
    p_int = all(abs(p[i] - mp.nint(p[i])) == 0 for i in range(g))
    eng_a = DefiniteThetaEngine(omega, p, q, ctx)
    omega_hat = omega.neg_inverse()
    eng_b = DefiniteThetaEngine(omega_hat, CVector([-q[i] for i in range(g)]),
                                p, ctx)
    tol = ctx.tail_eps

    E, _ = omega.imag().eigsy()
    Eh, _ = omega_hat.imag().eigsy()

    def fa(t):
        r = eng_a.value(t)
        v = r.value - 1 if q_int else r.value
        return v, r.err

    def fb(t):
        r = eng_b.value(t)
        v = r.value - 1 if p_int else r.value
        return v, r.err

    # decay rates: smallest nonzero Gaussian exponent on each side
    ra = _definite_rate(omega, q, q_int)
    rb = _definite_rate(omega_hat, p, p_int)
    Ia = MellinIntegral(fa, ra, tol, powers_re_max=float(abs(mp.re(s))) + 1)
    Ib = MellinIntegral(fb, rb, tol,
                        powers_re_max=float(abs(mp.re(mpf(g) / 2 - s))) + 1)
    va, ea = Ia.values([s])[s]
    vb, eb = Ib.values([mpf(g) / 2 - s])[mpf(g) / 2 - s]
    D = sqrt_det_definite(omega)
    res = va + _e(p.dot(q)) / D * vb
    err = ea + eb / abs(D)
    if q_int:
        if s == 0:
            raise DomainError("pole at s = 0 for integral q")
        res -= 1 / s
    if p_int:
        if s == mpf(g) / 2:
            raise DomainError("pole at s = g/2 for integral p")
        res += _e(p.dot(q)) / D / (s - mpf(g) / 2)
    return EvalResult(res, err, {"nodes": Ia.nodes + Ib.nodes})


def _definite_rate(omega, q, q_int):
    g = omega.g
    M = omega.imag()
    best = None
    import itertools
    for nn in itertools.product(range(-3, 4), repeat=g):
        m = [nn[i] + q[i] for i in range(g)]
        if all(x == 0 for x in m):
            continue
        v = 2 * pi * quad_form(M, CVector(m))
        best = v if best is None else min(best, v)
    return float(best)


# ---- indefinite zeta ------------------------------------------------------


class IndefiniteZeta:
    """Entire-in-s evaluator of the completed indefinite zeta.

    Theta node values are cached, so .at(s) is cheap after the first call
    with comparable |Re s|.
    """

    def __init__(self, omega: SymMatrix, p: CVector, q: CVector,
                 c1: CVector, c2: CVector, ctx: PrecisionContext = None,
                 waypoints=None, smax: float = 3.0):
        self.ctx = ctx or DEFAULT_CTX
        with self.ctx.workdps():
            self.g = omega.g
            self.omega = omega
            self.p, self.q = p, q
            params_a = ThetaParams(omega, p, q, c1, c2, waypoints=waypoints,
                                   ctx=self.ctx)
            omega_hat = omega.neg_inverse()
            obar = omega.conj()
            tc = [CVector(obar.m * c.m) for c in (c1, c2)]
            tway = [CVector(obar.m * c.m) for c in waypoints] if waypoints else None
            params_b = ThetaParams(omega_hat, CVector([-q[i] for i in range(self.g)]),
                                   p, tc[0], tc[1], waypoints=tway, ctx=self.ctx)
            self.eng_a = ThetaNullEngine(params_a)
            self.eng_b = ThetaNullEngine(params_b)
            self.D = sqrt_det_indefinite(omega)
            self.epq = _e(p.dot(q))
            tol = self.ctx.tail_eps

            def fa(t):
                r = self.eng_a.value(t)
                return r.value, r.err

            def fb(t):
                r = self.eng_b.value(t)
                return r.value, r.err

            self.Ia = MellinIntegral(fa, self._rate(self.eng_a), tol,
                                     powers_re_max=smax)
            self.Ib = MellinIntegral(fb, self._rate(self.eng_b), tol,
                                     powers_re_max=smax)

    @staticmethod
    def _rate(eng):
        """Sharp decay rate: min per-term bound exponent at t = 1."""
        R0 = min(12.0, 6.0 / math.sqrt(eng.feps))
        N = int(R0 + 3)
        n1 = np.arange(-N, N + 1)
        g1, g2 = np.meshgrid(n1, n1, indexing="ij")
        m1 = g1 + eng.fq[0]
        m2 = g2 + eng.fq[1]
        F = (eng.fM[0, 0] * m1 * m1 + 2 * eng.fM[0, 1] * m1 * m2
             + eng.fM[1, 1] * m2 * m2)
        if eng.real_path:
            bexp = None
            for i in range(eng.K):
                nu_a = eng.fw[i][0] * m1 + eng.fw[i][1] * m2
                nu_b = eng.fw[i + 1][0] * m1 + eng.fw[i + 1][1] * m2
                same = np.sign(nu_a) == np.sign(nu_b)
                extra = np.minimum(nu_a ** 2, nu_b ** 2)
                e_i = math.pi * (F + np.where(same, extra, 0.0))
                bexp = e_i if bexp is None else np.minimum(bexp, e_i)
        else:
            bexp = math.pi * eng.feps * (m1 * m1 + m2 * m2)
        live = np.abs(m1) + np.abs(m2) > 1e-12
        return max(float(np.min(bexp[live])), math.pi * eng.feps * 0.01)

    def at(self, s) -> EvalResult:
        with self.ctx.workdps():
            s = mpc(s)
            pa = s
            pb = mpf(self.g) / 2 - s
            va, ea = self.Ia.values([pa])[pa]
            vb, eb = self.Ib.values([pb])[pb]
            val = va + self.epq / self.D * vb
            err = ea + eb / abs(self.D)
            return EvalResult(val, err, {
                "nodes": self.Ia.nodes + self.Ib.nodes,
                "sqrt_det": self.D})


def indefinite_zeta(p: CVector, q: CVector, c1: CVector, c2: CVector,
                    omega: SymMatrix, s, ctx: PrecisionContext = None,
                    waypoints=None) -> EvalResult:
    """zh^{c1,c2}_{p,q}(Omega, s) via the two-integral continuation."""
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        if _proj_equal(c1, c2):
            return EvalResult(mpc(0), mpf(0), {"terms": 0})
        smax = float(max(abs(mp.re(mpc(s))), abs(omega.g / 2 - mp.re(mpc(s))))) + 1
        ev = IndefiniteZeta(omega, p, q, c1, c2, ctx, waypoints, smax=smax)
        return ev.at(s)


def _proj_equal(c1, c2):
    k = max(range(c1.g), key=lambda i: abs(c1[i]))
    if c2[k] == 0:
        return False
    ratio = c1[k] / c2[k]
    return all(abs(c1[i] - ratio * c2[i]) <= mpf(10) ** (-(mp.dps - 5))
               for i in range(c1.g))


# ---- series side ----------------------------------------------------------


def incomplete_zeta_series(p: CVector, q: CVector, c1: CVector, c2: CVector,
                           omega: SymMatrix, s, ctx: PrecisionContext = None,
                           accel: bool = True, bound: int = 60) -> EvalResult:
    """The Dirichlet-series part of the splitsy decomposition:

        Z(s) = 1/2 sum_{n in Z^g + q} (sgn(c2^T M n) - sgn(c1^T M n))
                      e(p^T n) (n^T (-i Omega) n)^{-s},

    convergent for Re(s) > 1; nonzero terms live in the double wedge between
    the cone walls, points on a wall weighted 1/2.  The sgn order and the
    full quadratic form match the term-by-term Mellin transform of the theta
    series (the published statement of the decomposition has the opposite
    sgn order, inconsistent with its own f(c)|_{c1}^{c2} convention; the
    ray-class specialisation and the Mellin computation both fix it this way).

    For rational data (accel=True requires p = 0, Omega = i*(rational M),
    rational q and rational cone directions) the wedge sum is evaluated by
    Euler-Maclaurin acceleration in unimodular cone coordinates and the
    result carries a tiny error bound; otherwise a direct radial sum with an
    honest polynomial tail bound is returned.
    """
    from .conesum import wedge_zeta_accel, wedge_zeta_direct
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        s = mpc(s)
        if not mp.re(s) > 1:
            raise DivergentRegion("incomplete zeta series needs Re(s) > 1")
        if accel:
            try:
                return wedge_zeta_accel(p, q, c1, c2, omega, s, ctx)
            except ValidationError:
                pass
        return wedge_zeta_direct(p, q, c1, c2, omega, s, ctx, bound)


def xi_series(p: CVector, q: CVector, c: CVector, omega: SymMatrix, s,
              ctx: PrecisionContext = None, accel: bool = True,
              bound: int = 60) -> EvalResult:
    """The hypergeometric correction series

        Xi^c(s) = 1/(2s) sum_{n in Z^g + q, c^T M n != 0} sgn(c^T M n)
                  e(p^T n) ((c^T M n)^2 / (-Q_M(c)))^{-s}
                  2F1(s, s+1/2; s+1; 2 Q_M(c) Q_{-iOmega}(n) / (c^T M n)^2),

    with Q the half-form.  This is the exact term-by-term Mellin remainder
    (the published series differs by the 1/s factor and by a sign under the
    -s power; both corrections follow from the incomplete-Mellin lemma).
    splitsy:  zh = pi^{-s} Gamma(s) Z(s)
                   - pi^{-(s+1/2)} Gamma(s+1/2) (Xi^{c2} - Xi^{c1}).
    """
    from .conesum import xi_accel, xi_direct
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        s = mpc(s)
        if not mp.re(s) > 1:
            raise DivergentRegion("xi series needs Re(s) > 1")
        if not c.is_real(tol=0):
            raise ConeViolation("xi series requires a real cone parameter")
        if accel:
            try:
                return xi_accel(p, q, c, omega, s, ctx)
            except ValidationError:
                pass
        return xi_direct(p, q, c, omega, s, ctx, bound)


def zeta_p_stable(p: CVector, q: CVector, c1: CVector, c2: CVector,
                  omega: SymMatrix, s, P, ctx: PrecisionContext = None
                  ) -> EvalResult:
    """pi^{-s} Gamma(s) * incomplete_zeta_series, valid when (c1,c2,p+Omega q,
    Omega) is P-stable (the xi corrections cancel)."""
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        s = mpc(s)
        params = ThetaParams(omega, p, q, c1, c2, ctx=ctx)
        z = CVector(p.m + omega.m * q.m)
        if not is_p_stable(P, params, z):
            raise NotPStable("(c1, c2, p + Omega q, Omega) is not P-stable")
        core = incomplete_zeta_series(p, q, c1, c2, omega, s, ctx)
        pref = pi ** (-s) * gamma(s)
        return EvalResult(pref * core.value, abs(pref) * core.err,
                          core.diagnostics)
