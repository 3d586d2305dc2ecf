"""Tanh-sinh quadrature of Mellin-type integrals with node caching.

Computes int_1^inf f(t) t^p dt/t for several powers p from one set of f
evaluations: substitute t = e^u, map [0, U] through the tanh-sinh change of
variables, and refine by level halving until the per-power sums stabilize.
f returns (value, err); reported error adds the integrand's own error bounds
to the refinement estimate.
"""
from __future__ import annotations

import math

from mpmath import mp, mpf, mpc, exp, pi, sinh, cosh, tanh

from .errors import QuadratureStalled

LN10 = math.log(10)


class MellinIntegral:
    def __init__(self, f, decay_rate, tol, powers_re_max=2.0, max_level=11):
        """f: t -> (value, err_bound); decay_rate a with |f(t)| <~ exp(-a t)."""
        self.f = f
        self.a = float(decay_rate)
        self.tol = mpf(tol)
        self.logtol = float(mp.log10(self.tol))
        # U with e^{-a e^U} * e^{p U} < tol
        L = -self.logtol * LN10 + 5
        u = math.log(max(L, 2.0) / self.a)
        for _ in range(4):
            u = math.log((L + max(0.0, powers_re_max) * max(u, 1.0)) / self.a)
        self.U = mpf(max(u, 0.5)) + mpf("0.5")
        self.W = math.asinh(2 * (L + math.log(float(self.U) + 2) + 5) / math.pi)
        self.max_level = max_level
        self.LMAX = max_level + 2
        self.vals = {}          # dyadic key -> (u, fval, ferr, dxdw)
        self.levels_done = 0
        self.nodes = 0

    def _node(self, k, h):
        key = k * (1 << (self.LMAX - self._level))
        got = self.vals.get(key)
        if got is not None:
            return got
        w = mpf(k) * h
        sh = pi / 2 * sinh(w)
        x = tanh(sh)
        u = self.U / 2 * (1 + x)
        dxdw = (self.U / 2) * (pi / 2) * cosh(w) / cosh(sh) ** 2
        if float(dxdw) < float(self.tol) * 1e-4:
            fv, fe = mpc(0), mpf(0)
        else:
            fv, fe = self.f(exp(u))
            self.nodes += 1
        rec = (u, fv, fe, dxdw)
        self.vals[key] = rec
        return rec

    def values(self, powers):
        """dict power -> (integral, err) with shared f evaluations."""
        powers = list(powers)
        prev = None
        prev_delta = None
        for level in range(3, self.max_level + 1):
            self._level = level
            h = mpf(1) / 2 ** level
            kmax = int(self.W * 2 ** level) + 1
            tot = {p: mpc(0) for p in powers}
            ferr_tot = {p: mpf(0) for p in powers}
            for k in range(-kmax, kmax + 1):
                u, fv, fe, dxdw = self._node(k, h)
                if fv == 0 and fe == 0:
                    continue
                for p in powers:
                    wgt = h * dxdw * exp(p * u)
                    tot[p] += wgt * fv
                    ferr_tot[p] += abs(wgt) * fe
            if prev is not None:
                delta = max(abs(tot[p] - prev[p]) for p in powers)
                if prev_delta is not None and prev_delta > 0:
                    est = min(delta, delta * delta / prev_delta)
                else:
                    est = delta
                if est < self.tol / 4:
                    return {p: (tot[p], ferr_tot[p] + est) for p in powers}
                prev_delta = delta
            prev = tot
        raise QuadratureStalled(
            f"tanh-sinh refinement did not reach tol={self.tol}")
