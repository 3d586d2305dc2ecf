"""Definite and indefinite theta functions.

The indefinite engine evaluates the theta null

    Theta^{c1,c2}_{p,q}(t * Omega)
      = sum_{m in Z^g + q} [E_f(sqrt(t) nu_c(m))]_{c=c1}^{c2}
            e(p^T m) e(t Q_Omega(m)),
      nu_c(m) = c^T M m / sqrt(-(1/2) c^T M c),

for many values of t (that is what the zeta Mellin integrals need).  Lattice
points are prefiltered in float64 with rigorous log-bounds, surviving terms
are evaluated in mpmath at a per-term working precision matched to the term's
magnitude, and the reported error adds the exterior tail bound to the skipped
interior bounds.

Cone parameters may be complex.  Endpoint E-values can then be exponentially
large while the difference stays bounded, so terms are assembled from the
sign part (sigma_2 - sigma_1)/2 and erfc tails, each multiplied by the
exponential factor separately (see special.gaussian_E_parts).

A cone *path* (waypoints) may be supplied: the value only depends on the
endpoints, but truncation bounds use the best exponential rate along the
path, which matters when the endpoint pair spans a wide wedge hugging the
light cone (e.g. c2 = P^k c1 for large k).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf, mpc, sqrt, exp, pi, erfc, gamma, matrix

from .ctx import PrecisionContext, DEFAULT_CTX
from .errors import (ConeViolation, DimensionMismatch, NotDefiniteHalfSpace,
                     NotIndefiniteHalfSpace, NotUnimodular,
                     NonRealConeWithAbsPow, ValidationError)
from .linalg import CVector, SymMatrix, bilinear, quad_form, signature
from .result import EvalResult
from .roots import CanonicalSqrtMinusQM
from .special import TestFunction, gaussian_E, gaussian_E_r

LN10 = math.log(10)


@dataclass
class TruncationPlan:
    epsilon: object           # certified quadratic decay rate (mpf)
    radius: object            # lattice cutoff used at t = 1
    shell_order: str = "ascending-shell-then-lex"


class ThetaParams:
    """Validated bundle (Omega, p, q, c1, c2, f [, waypoints])."""

    def __init__(self, omega: SymMatrix, p=None, q=None, c1=None, c2=None,
                 f: TestFunction = None, waypoints=None, ctx: PrecisionContext = None):
        self.ctx = ctx or DEFAULT_CTX
        self.omega = omega
        g = omega.g
        self.g = g
        self.p = p if p is not None else CVector([0] * g)
        self.q = q if q is not None else CVector([0] * g)
        if not (self.p.is_real(tol=0) and self.q.is_real(tol=0)):
            raise ValidationError("characteristics p, q must be real")
        self.f = f or TestFunction.one()
        self.M = omega.imag()
        j, k = signature(self.M)
        self.definite = (k == 0)
        if c1 is None and c2 is None:
            if not self.definite:
                raise NotDefiniteHalfSpace(
                    "cone parameters required for indefinite Omega")
            self.c1 = self.c2 = None
            self.waypoints = None
            return
        if k != 1:
            raise NotIndefiniteHalfSpace(f"Im(Omega) has signature ({j},{k})")
        self.c1 = c1
        self.c2 = c2
        for c in (c1, c2):
            v = mp.re(bilinear(self.M, c.conj(), c))
            if not v < 0:
                raise ConeViolation(f"conj(c)^T M c = {v} not negative")
        if not self.f.is_one:
            if not (c1.is_real(tol=0) and c2.is_real(tol=0)):
                raise NonRealConeWithAbsPow(
                    "|u|^r test functions require real cone parameters")
        self.waypoints = list(waypoints) if waypoints else None
        if self.waypoints:
            for c in self.waypoints:
                v = mp.re(bilinear(self.M, c.conj(), c))
                if not v < 0:
                    raise ConeViolation("waypoint outside cone")


def _pair_normalize(M: SymMatrix, c1: CVector, c2: CVector):
    """Rescale c2 by a unit-modulus scalar so Re(conj(c1)^T M c2) < 0."""
    b = bilinear(M, c1.conj(), c2)
    if b == 0:
        return c2
    if mp.re(b) < 0:
        return c2
    alpha = -mp.conj(b) / abs(b)
    return c2.scale(alpha)


def _a_matrix(M: SymMatrix, c: CVector):
    """A_c = M + M Re((-Q_M(c))^{-1} c c^T) M, positive definite on the cone."""
    qc = -quad_form(M, c)
    g = M.g
    cc = matrix(g, g)
    for i in range(g):
        for jj in range(g):
            cc[i, jj] = mp.re(c[i] * c[jj] / qc)
    return SymMatrix(M.m + M.m * cc * M.m, symmetrize=True)


def conv_epsilon(M: SymMatrix, c1: CVector, c2: CVector, grid: int = 33,
                 safety=None, waypoints=None):
    """Certified lower bound for the quadratic decay rate of theta terms.

    Minimum over the cone path (piecewise linear through the waypoints) and a
    lambda grid of the smallest eigenvalue of A(lambda), times a safety
    factor 1/2 covering grid error.
    """
    if safety is None:
        safety = mpf(1) / 2
    path = [c1] + (list(waypoints) if waypoints else []) + [c2]
    best = None
    for a, b in zip(path, path[1:]):
        b = _pair_normalize(M, a, b)
        for i in range(grid):
            lam = mpf(i) / (grid - 1)
            c = CVector(a.m * (1 - lam) + b.m * lam)
            v = mp.re(bilinear(M, c.conj(), c))
            if not v < 0:
                raise ConeViolation("cone path leaves the cone; "
                                    "normalize the pair or add waypoints")
            A = _a_matrix(M, c)
            E, _ = A.eigsy()
            lo = min(E)
            if lo <= 0:
                raise ConeViolation("A(lambda) not positive definite")
            best = lo if best is None else min(best, lo)
    return best * safety


def _real_class(c: CVector, tol):
    """Return a real representative of [c] in P^{g-1}(C), or None."""
    k = max(range(c.g), key=lambda i: abs(c[i]))
    pivot = c[k]
    if pivot == 0:
        return None
    d = [c[i] / pivot for i in range(c.g)]
    if all(abs(mp.im(x)) <= tol for x in d):
        return CVector([mp.re(x) for x in d])
    return None


def _shellsort(i1, i2):
    """Deterministic order: ascending integer shell, then lexicographic."""
    shell = np.maximum(np.abs(i1), np.abs(i2))
    order = np.lexsort((i2, i1, shell))
    return i1[order], i2[order]


class ThetaNullEngine:
    """t -> Theta^{c1,c2}_{p,q}(t * Omega) for fixed parameters (g = 2)."""

    def __init__(self, params: ThetaParams):
        if params.g != 2:
            raise DimensionMismatch("indefinite theta engine supports g = 2")
        if params.definite:
            raise NotIndefiniteHalfSpace("use DefiniteTheta for definite Omega")
        self.params = params
        self.ctx = params.ctx
        M = params.M
        self.M = M
        self.N = params.omega.real()
        self.root = CanonicalSqrtMinusQM(M)
        tol = mpf(10) ** (-(mp.dps - 5))

        path = [params.c1] + (params.waypoints or []) + [params.c2]
        reals = [_real_class(c, tol) for c in path]
        self.real_path = all(r is not None for r in reals)
        if self.real_path:
            # canonical-positive representatives: nu via positive sqrt
            fixed = []
            for r in reals:
                r = CVector([x / r.norm() for x in r])
                if self.root(r) < 0:
                    r = -r
                fixed.append(r)
            self.path = fixed
            self.w = [M.mul_vec(r) for r in fixed]            # rows c^T M
            self.s = [sqrt(-quad_form(M, r)) for r in fixed]  # positive
        else:
            if not params.f.is_one:
                raise NonRealConeWithAbsPow(
                    "|u|^r requires a real cone path")
            fixed = [CVector([x / c.norm() for x in c]) for c in path]
            for i in range(1, len(fixed)):
                fixed[i] = _pair_normalize(M, fixed[i - 1], fixed[i])
            self.path = fixed
            self.w = [M.mul_vec(c) for c in fixed]
            self.s = [self.root(c) / sqrt(2) for c in fixed]
        self.K = len(self.path) - 1

        self.eps = conv_epsilon(M, params.c1, params.c2,
                                waypoints=params.waypoints)
        self.feps = float(self.eps)

        # float copies for the prefilter
        self.fM = np.array([[float(M[i, j]) for j in range(2)] for i in range(2)])
        self.fq = np.array([float(params.q[i]) for i in range(2)])
        self.fw = []
        for wi, si in zip(self.w, self.s):
            if self.real_path:
                self.fw.append(np.array([float(wi[0]), float(wi[1])]) / float(si))
            else:
                self.fw.append(None)
        if not self.real_path:
            # endpoint A-matrices for per-endpoint bounds
            self.fA = [np.array([[float(_a_matrix(M, c)[i, j]) for j in range(2)]
                                 for i in range(2)]) for c in self.path]
        self.has_p = any(params.p[i] != 0 for i in range(2))
        self.r_real = None if params.f.is_one else mp.re(params.f.r)
        self.evals = 0
        self.last_plan = None

    # ---- truncation ----------------------------------------------------

    def _tail(self, a, R, majC):
        """Bound sum_{||m|| >= R} majC*(1+||m||)^pw * exp(-a ||m||^2)."""
        pw = 1 + (float(self.r_real) if self.r_real is not None and self.r_real > 0 else 0)
        total = 0.0
        k = max(int(R), 1)
        while True:
            count = 8.0 * (k + 2)          # lattice points in shell [k, k+1)
            term = majC * count * (2 + k) ** pw * math.exp(-a * k * k)
            total += term
            if term < 1e-320 or (k > R + 10 and term < total * 1e-25):
                break
            k += 1
            if k > R + 100000:
                break
        return total

    def _radius(self, t, target_log10):
        """Smallest radius whose tail bound is below 10^target_log10."""
        a = math.pi * self.feps * float(t)
        majC = 4.0 * math.sqrt(float(t)) * (1 + self.K) * \
            max(1.0, max(np.linalg.norm(self.fM)), 1.0)
        R = math.sqrt(max(-target_log10 * LN10, 1.0) / a) + 2
        while True:
            tail = self._tail(a, R, majC)
            if tail <= 10 ** target_log10 or R > 1e7:
                return R, tail
            R *= 1.15

    # ---- candidate selection -------------------------------------------

    def _candidates(self, t, R, thr_log10):
        ft = float(t)
        N = int(math.ceil(R + abs(self.fq).max() + 1))
        n1 = np.arange(-N, N + 1)
        g1, g2 = np.meshgrid(n1, n1, indexing="ij")
        m1 = g1 + self.fq[0]
        m2 = g2 + self.fq[1]
        F = (self.fM[0, 0] * m1 * m1 + 2 * self.fM[0, 1] * m1 * m2
             + self.fM[1, 1] * m2 * m2)
        nrm2 = m1 * m1 + m2 * m2
        base = math.pi * self.feps * ft * nrm2
        if self.real_path:
            nus = [w[0] * m1 + w[1] * m2 for w in self.fw]
            bexp = None
            for i in range(self.K):
                same = np.sign(nus[i]) == np.sign(nus[i + 1])
                extra = np.minimum(nus[i] ** 2, nus[i + 1] ** 2)
                e_i = math.pi * ft * (F + np.where(same, extra, 0.0))
                e_i = np.maximum(e_i, base)
                bexp = e_i if bexp is None else np.minimum(bexp, e_i)
        else:
            bexp = base
        keep = (bexp / LN10 < -thr_log10 + 2) & (nrm2 <= (R + 1) ** 2)
        i1 = g1[keep]
        i2 = g2[keep]
        i1, i2 = _shellsort(i1, i2)
        nskip = int(keep.size - keep.sum())
        return i1, i2, nskip

    # ---- term evaluation -----------------------------------------------

    def value(self, t, target=None) -> EvalResult:
        """Theta null at t * Omega with reported absolute error bound."""
        ctx = self.ctx
        with ctx.workdps():
            t = mpf(t)
            if target is None:
                target = ctx.tail_eps
            tlog = float(mp.log10(target))
            R, tail = self._radius(t, tlog)
            ncells_est = (2 * (R + 2)) ** 2
            termtol_log = tlog - 1 - math.log10(ncells_est)
            i1, i2, nskip = self._candidates(t, R, termtol_log)
            self.last_plan = TruncationPlan(epsilon=self.eps, radius=mpf(R))
            nterms = len(i1)
            st = sqrt(t)
            q = self.params.q
            p = self.params.p
            total = mpc(0)
            Mm = self.M.m
            Nm = self.N.m
            has_N = any(Nm[i, j] != 0 for i in range(2) for j in range(2))
            f_one = self.params.f.is_one
            cut = (-termtol_log + 3) * LN10
            for idx in range(nterms):
                m1 = i1[idx] + q[0]
                m2 = i2[idx] + q[1]
                F = (Mm[0, 0] * m1 * m1 + 2 * Mm[0, 1] * m1 * m2
                     + Mm[1, 1] * m2 * m2)
                efac_log = -math.pi * float(t) * float(F)
                ph = exp(-pi * t * F)
                if has_N:
                    G = (Nm[0, 0] * m1 * m1 + 2 * Nm[0, 1] * m1 * m2
                         + Nm[1, 1] * m2 * m2)
                    ph *= exp(1j * pi * t * G)
                if self.has_p:
                    ph *= exp(2j * pi * (p[0] * m1 + p[1] * m2))
                if self.real_path:
                    x1 = st * (self.w[0][0] * m1 + self.w[0][1] * m2) / self.s[0]
                    x2 = st * (self.w[-1][0] * m1 + self.w[-1][1] * m2) / self.s[-1]
                    if f_one:
                        ed = _ediff_real_one(x1, x2, cut + max(0.0, efac_log))
                    else:
                        ed = _ediff_real_pow(x1, x2, self.params.f.r)
                    if ed == 0:
                        continue
                    total += ed * ph
                else:
                    total += _term_complex(
                        st, m1, m2, self.w, self.s, ph, cut + max(0.0, efac_log))
                self.evals += 1
            err = mpf(tail) + mpf(10) ** termtol_log * nskip \
                + nterms * mpf(10) ** (-(mp.dps - 3))
            return EvalResult(total, err,
                              {"terms": nterms, "radius": R, "skipped": nskip})


def _ediff_real_one(x1, x2, cut):
    """E(x2) - E(x1) for real x, f = 1, with saturation handling."""
    pix1 = math.pi * float(x1) ** 2
    pix2 = math.pi * float(x2) ** 2
    h1 = 0 if x1 == 0 else (1 if x1 > 0 else -1)
    h2 = 0 if x2 == 0 else (1 if x2 > 0 else -1)
    r1 = mpf(0) if (x1 == 0 or pix1 > cut) else h1 * erfc(sqrt(pi) * abs(x1)) / 2
    r2 = mpf(0) if (x2 == 0 or pix2 > cut) else h2 * erfc(sqrt(pi) * abs(x2)) / 2
    if pix1 <= 2 or pix2 <= 2:
        # small args: direct erf difference is cheap and exact enough
        return gaussian_E(x2) - gaussian_E(x1)
    return mpf(h2 - h1) / 2 - r2 + r1


def _ediff_real_pow(x1, x2, r):
    return gaussian_E_r(x2, r) - gaussian_E_r(x1, r)


def _sigma_c(a):
    re = mp.re(a)
    if re > 0:
        return 1
    if re < 0:
        return -1
    return 1 if mp.im(a) >= 0 else -1


def _term_complex(st, m1, m2, w, s, ph, cut):
    """Stable [E(x2)-E(x1)] * ph for complex cone endpoints."""
    x1 = st * (w[0][0] * m1 + w[0][1] * m2) / s[0]
    x2 = st * (w[-1][0] * m1 + w[-1][1] * m2) / s[-1]
    if abs(x1) < 1 and abs(x2) < 1:
        return (gaussian_E(x2) - gaussian_E(x1)) * ph
    s1 = _sigma_c(x1)
    s2 = _sigma_c(x2)
    out = mpc(0)
    if s2 != s1:
        out += mpf(s2 - s1) / 2 * ph
    for sj, xj, sign_ in ((s2, x2, -1), (s1, x1, 1)):
        rex2 = math.pi * float(mp.re(xj ** 2))
        if rex2 > cut:
            continue
        extra = max(0, int(-min(0.0, rex2) / LN10) + 8)
        old = mp.dps
        try:
            mp.dps = old + extra
            val = erfc(sqrt(pi) * sj * xj)
        finally:
            mp.dps = old
        out += sign_ * sj * val / 2 * ph
    return out


# ---- definite theta ------------------------------------------------------


class DefiniteThetaEngine:
    """t -> Theta_{p,q}(t * Omega) for Omega in H_g^(0) (any small g)."""

    def __init__(self, omega: SymMatrix, p: CVector, q: CVector,
                 ctx: PrecisionContext = None):
        self.ctx = ctx or DEFAULT_CTX
        j, k = signature(omega.imag())
        if k != 0:
            raise NotDefiniteHalfSpace(f"Im(Omega) signature ({j},{k})")
        self.omega = omega
        self.g = omega.g
        self.p = p
        self.q = q
        self.M = omega.imag()
        E, _ = self.M.eigsy()
        self.eigmin = min(E)
        self.N = omega.real()

    def value(self, t, target=None) -> EvalResult:
        ctx = self.ctx
        with ctx.workdps():
            t = mpf(t)
            if target is None:
                target = ctx.tail_eps
            a = pi * self.eigmin * t
            R = mp.sqrt(mp.log(1 / target) / a) + 2
            g = self.g
            rng = [range(int(mp.floor(-R - 1)), int(mp.ceil(R + 1)) + 1)
                   for _ in range(g)]
            total = mpc(0)
            nterms = 0
            Om = self.omega.m
            q, p = self.q, self.p
            has_p = any(p[i] != 0 for i in range(g))
            import itertools
            for nn in itertools.product(*rng):
                m = [nn[i] + q[i] for i in range(g)]
                if sum(x * x for x in m) > (R + 1) ** 2:
                    continue
                qf = sum(Om[i, jj] * m[i] * m[jj]
                         for i in range(g) for jj in range(g)) / 2
                term = exp(2j * pi * t * qf)
                if has_p:
                    term *= exp(2j * pi * sum(p[i] * m[i] for i in range(g)))
                total += term
                nterms += 1
            tail = mpf(8) * (R + 2) ** g * exp(-a * R ** 2)
            return EvalResult(total, tail, {"terms": nterms, "radius": float(R)})


def definite_theta(z: CVector, omega: SymMatrix, ctx: PrecisionContext = None
                   ) -> EvalResult:
    """Riemann theta sum_n e(n^T Omega n / 2 + n^T z), Omega in H_g^(0)."""
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        j, k = signature(omega.imag())
        if k != 0:
            raise NotDefiniteHalfSpace(f"Im(Omega) signature ({j},{k})")
        g = omega.g
        M = omega.imag()
        E, _ = M.eigsy()
        eigmin = min(E)
        y = z.imag()
        center = CVector(M.inverse().m * y.m)
        ymy = bilinear(M.inverse(), y, y)
        target = ctx.tail_eps
        R = mp.sqrt((mp.log(1 / target) + pi * abs(ymy)) / (pi * eigmin)) + 2
        import itertools
        rng = [range(int(mp.floor(-R - 1 - abs(center[i]))),
                     int(mp.ceil(R + 1 + abs(center[i]))) + 1) for i in range(g)]
        total = mpc(0)
        nterms = 0
        Om = omega.m
        for nn in itertools.product(*rng):
            d2 = sum((nn[i] + center[i]) ** 2 for i in range(g))
            if d2 > (R + 1) ** 2:
                continue
            qf = sum(Om[i, jj] * nn[i] * nn[jj] for i in range(g) for jj in range(g)) / 2
            lin = sum(nn[i] * z[i] for i in range(g))
            total += exp(2j * pi * (qf + lin))
            nterms += 1
        tail = mpf(8) * (R + 2) ** g * exp(pi * abs(ymy)) * exp(-pi * eigmin * R ** 2)
        return EvalResult(total, tail, {"terms": nterms, "radius": float(R)})


def definite_theta_null(p: CVector, q: CVector, omega: SymMatrix,
                        ctx: PrecisionContext = None) -> EvalResult:
    """Theta_{p,q}(Omega) = e(q^T Omega q / 2 + p^T q) Theta(p + Omega q; Omega)."""
    ctx = ctx or DEFAULT_CTX
    with ctx.workdps():
        eng = DefiniteThetaEngine(omega, p, q, ctx)
        return eng.value(mpf(1))


# ---- public indefinite entry points --------------------------------------


def indefinite_theta(z: CVector, params: ThetaParams) -> EvalResult:
    """Theta^{c1,c2}[f](z; Omega) by direct summation over n in Z^g.

    c1 = c2 gives exactly 0.  General elliptic argument z; for the theta null
    prefer indefinite_theta_null, which uses the faster lattice-folded form.
    """
    ctx = params.ctx
    with ctx.workdps():
        if _same_cone(params):
            return EvalResult(mpc(0), mpf(0), {"terms": 0})
        eng = _GeneralZEngine(params, z)
        return eng.value()


def _same_cone(params: ThetaParams) -> bool:
    c1, c2 = params.c1, params.c2
    # projectively equal?
    k = max(range(c1.g), key=lambda i: abs(c1[i]))
    if c2[k] == 0:
        return False
    ratio = c1[k] / c2[k]
    return all(abs(c1[i] - ratio * c2[i]) <= mpf(10) ** (-(mp.dps - 5))
               for i in range(c1.g))


class _GeneralZEngine(ThetaNullEngine):
    """Direct-z variant: value() = Theta^{c1,c2}[f](z; Omega)."""

    def __init__(self, params: ThetaParams, z: CVector):
        super().__init__(params)
        self.z = z

    def value(self, t=1, target=None) -> EvalResult:
        ctx = self.ctx
        with ctx.workdps():
            if target is None:
                target = ctx.tail_eps
            z = self.z
            M = self.M
            y = z.imag()
            Minv = M.inverse()
            center = CVector(Minv.m * y.m)
            ymy = bilinear(Minv, y, y)
            boost = float(pi * abs(ymy)) / LN10
            tlog = float(mp.log10(target)) - boost
            R, tail = self._radius(mpf(1), tlog)
            tail *= math.exp(float(pi * abs(ymy)))
            fc = np.array([float(center[0]), float(center[1])])
            N = int(math.ceil(R + abs(fc).max() + 1))
            n1 = np.arange(-N, N + 1)
            g1, g2 = np.meshgrid(n1, n1, indexing="ij")
            m1 = g1 + fc[0]
            m2 = g2 + fc[1]
            nrm2 = m1 * m1 + m2 * m2
            keep = nrm2 <= (R + 1) ** 2
            i1, i2 = _shellsort(g1[keep], g2[keep])
            total = mpc(0)
            Om = self.params.omega.m
            cut = (-tlog + 6) * LN10
            for idx in range(len(i1)):
                n = (mpf(int(i1[idx])), mpf(int(i2[idx])))
                wv = (M.m[0, 0] * n[0] + M.m[0, 1] * n[1] + y[0],
                      M.m[1, 0] * n[0] + M.m[1, 1] * n[1] + y[1])
                qf = (Om[0, 0] * n[0] * n[0] + 2 * Om[0, 1] * n[0] * n[1]
                      + Om[1, 1] * n[1] * n[1]) / 2
                lin = n[0] * z[0] + n[1] * z[1]
                ph = exp(2j * pi * (qf + lin))
                if self.real_path:
                    x1 = (self.w[0][0] * wv[0] + self.w[0][1] * wv[1]) / self.s[0]
                    x2 = (self.w[-1][0] * wv[0] + self.w[-1][1] * wv[1]) / self.s[-1]
                    if self.params.f.is_one:
                        ed = _ediff_real_one(x1, x2, cut)
                    else:
                        ed = _ediff_real_pow(x1, x2, self.params.f.r)
                    if ed != 0:
                        total += ed * ph
                else:
                    a1 = (self.w[0][0] * wv[0] + self.w[0][1] * wv[1]) / self.s[0]
                    a2 = (self.w[-1][0] * wv[0] + self.w[-1][1] * wv[1]) / self.s[-1]
                    total += _pair_term(a1, a2, ph, cut)
            return EvalResult(total, mpf(tail), {"terms": len(i1), "radius": R})


def _pair_term(a1, a2, ph, cut):
    if abs(a1) < 1 and abs(a2) < 1:
        return (gaussian_E(a2) - gaussian_E(a1)) * ph
    s1 = _sigma_c(a1)
    s2 = _sigma_c(a2)
    out = mpc(0)
    if s2 != s1:
        out += mpf(s2 - s1) / 2 * ph
    for sj, xj, sign_ in ((s2, a2, -1), (s1, a1, 1)):
        rex2 = math.pi * float(mp.re(xj ** 2))
        if rex2 > cut:
            continue
        extra = max(0, int(-min(0.0, rex2) / LN10) + 8)
        old = mp.dps
        try:
            mp.dps = old + extra
            val = erfc(sqrt(pi) * sj * xj)
        finally:
            mp.dps = old
        out += sign_ * sj * val / 2 * ph
    return out


def indefinite_theta_null(params: ThetaParams, t=1) -> EvalResult:
    """Theta^{c1,c2}_{p,q}[f](t * Omega)."""
    with params.ctx.workdps():
        if _same_cone(params):
            return EvalResult(mpc(0), mpf(0), {"terms": 0})
        eng = ThetaNullEngine(params)
        return eng.value(mpf(t))


def indefinite_theta_r(params: ThetaParams, t=1) -> EvalResult:
    """Theta_r = pi^((r+1)/2) / Gamma((r+1)/2) * Theta[|u|^r] (r = 0 gives f = 1)."""
    f = params.f
    if f.is_one:
        r = mpc(0)
    else:
        r = f.r
    with params.ctx.workdps():
        norm = pi ** ((r + 1) / 2) / gamma((r + 1) / 2)
        res = indefinite_theta_null(params, t)
        return EvalResult(norm * res.value, abs(norm) * res.err, res.diagnostics)


# ---- P-stability ----------------------------------------------------------


def is_p_stable(P, params: ThetaParams, z: CVector, tol=None) -> bool:
    """P-stability of (c1, c2, z, Omega).

    Requires integer unimodular P with P^T Omega P = Omega, P c1 = c2 up to
    positive real scaling, and P^T z = z + a + Omega v for integer vectors
    a, v with e(v^T Omega v / 2 + v^T z) = 1.  For real z this reduces to the
    plain congruence P^T z = z mod Z^g; the lattice-shift form is what the
    ray-class data (z = p + Omega q with both characteristics rational)
    actually satisfies, and it is exactly the condition under which the
    n -> P n substitution maps the theta series to itself termwise.
    """
    with params.ctx.workdps():
        g = params.g
        Pm = [[int(P[i][j]) for j in range(g)] for i in range(g)]
        for i in range(g):
            for j in range(g):
                if P[i][j] != Pm[i][j]:
                    raise NotUnimodular("P must have integer entries")
        det = Pm[0][0] * Pm[1][1] - Pm[0][1] * Pm[1][0] if g == 2 else None
        if g != 2:
            raise DimensionMismatch("is_p_stable supports g = 2")
        if det not in (1, -1):
            raise NotUnimodular(f"det P = {det}")
        if tol is None:
            tol = mpf(10) ** (-(mp.dps - 8))
        Om = params.omega
        Pmat = matrix(Pm)
        R = Pmat.T * Om.m * Pmat - Om.m
        if max(abs(R[i, j]) for i in range(g) for j in range(g)) > tol:
            return False
        # P c1 = c2 up to positive real scale
        pc = CVector(Pmat * params.c1.m)
        k = max(range(g), key=lambda i: abs(pc[i]))
        if params.c2[k] == 0:
            return False
        lam = pc[k] / params.c2[k]
        if abs(mp.im(lam)) > tol or mp.re(lam) <= 0:
            return False
        if any(abs(pc[i] - lam * params.c2[i]) > tol * (1 + abs(lam)) for i in range(g)):
            return False
        # P^T z = z + a + Omega v with a, v integer and trivial phase
        M = params.M
        dz = CVector(Pmat.T * z.m - z.m)
        dy = dz.imag()
        v = CVector(M.inverse().m * dy.m)
        vint = [mp.nint(v[i]) for i in range(g)]
        if any(abs(v[i] - vint[i]) > tol for i in range(g)):
            return False
        vv = CVector(vint)
        a = CVector(dz.real().m - params.omega.real().m * vv.m)
        if any(abs(a[i] - mp.nint(a[i])) > tol for i in range(g)):
            return False
        phase = quad_form(Om, vv) + vv.dot(z)
        if abs(phase - mp.nint(mp.re(phase))) > tol:
            return False
        return True
