"""The three canonical square-root constructions.

* sqrt_det_definite: sqrt(det(-i Omega)) on the definite half-space, branch
  tracked along the straight line from i*I (where it equals 1).
* sqrt_minus_qm: the holomorphic square root g_M(z) of -z^T M z on the region
  conj(z)^T M z < 0, for real symmetric M of signature (g-1,1).
* sqrt_det_indefinite: sqrt(det(-i Omega)) on the index-1 half-space, built
  from the two roots above.

Orientation convention.  A continuous square root of -z^T M z is only unique
up to a global sign (the isometry group of an indefinite form has two
components, so a factorization M = P^T J P with det P > 0 pins the branch
only up to the component of P).  We normalize g_M to be positive on the
sign-normalized negative eigenvector of M.  With that normalization the
composite sqrt(det(-i Omega)) must carry an extra factor -1 for the theta
inversion law and the Mellin continuation to hold in their standard form;
this was fixed by direct numerical verification of the Fourier-transform
identity underlying the inversion law.  One resulting global identity:
sqrt(det(-i Omega)) * sqrt(det(i Omega^{-1})) = -1 on the index-1 half-space
(it is +1 on the definite half-space).
"""
from __future__ import annotations

from mpmath import mp, mpf, mpc, matrix, sqrt, arg

from .errors import (NotDefiniteHalfSpace, NotIndefiniteHalfSpace,
                     OutsideRegion, ValidationError)
from .linalg import CVector, SymMatrix, eye, signature, bilinear


def _gJ(w):
    """z1 * principal_sqrt(1 - sum (z_j/z_1)^2) on R_J, J = diag(-1,1,...,1)."""
    g = w.rows
    if w[0] == 0:
        raise OutsideRegion("first coordinate vanishes in J-frame")
    s = mpc(0)
    for j in range(1, g):
        s += (w[j] / w[0]) ** 2
    return w[0] * sqrt(1 - s)


class CanonicalSqrtMinusQM:
    """Reusable canonical square root g_M for a fixed signature-(g-1,1) M.

    Construction: symmetric eigendecomposition, rows scaled into J with the
    negative eigenvalue first, det fixed to +1 by negating the last row, and
    the global sign chosen so g_M(b) > 0 on the sign-normalized negative
    eigenvector b.
    """

    def __init__(self, M: SymMatrix):
        g = M.g
        Mr = M.real()
        j, k = signature(Mr)
        if k != 1:
            raise ValidationError(f"signature ({j},{k}) is not ({g - 1},1)")
        E, V = Mr.eigsy()
        idx = sorted(range(g), key=lambda i: E[i])
        P = matrix(g, g)
        for r, i in enumerate(idx):
            s = sqrt(abs(E[i]))
            for c in range(g):
                P[r, c] = s * V[c, i]
        # det(P)^2 = |det M| > 0; make det(P) > 0
        from mpmath import det as _det
        if _det(P) < 0:
            if g == 1:
                raise ValidationError("cannot orient 1x1 factorization")
            for c in range(g):
                P[g - 1, c] = -P[g - 1, c]
        b = matrix([V[c, idx[0]] for c in range(g)])
        jmax = max(range(g), key=lambda i: abs(b[i]))
        if b[jmax] < 0:
            b = -b
        base = _gJ(P * b)
        self.sign = 1 if mp.re(base) > 0 else -1
        self.P = P
        self.M = M
        self.neg_eigvec = CVector(b)

    def __call__(self, z: CVector):
        v = bilinear(self.M, z.conj(), z)
        if not (mp.re(v) < 0):
            raise OutsideRegion(f"conj(z)^T M z = {v} not negative")
        return self.sign * _gJ(self.P * z.m)


def sqrt_minus_qm(M: SymMatrix, z: CVector):
    """Canonical sqrt(-z^T M z); see CanonicalSqrtMinusQM for the branch."""
    return CanonicalSqrtMinusQM(M)(z)


def sqrt_det_definite(omega: SymMatrix):
    """Canonical sqrt(det(-i Omega)) on H_g^(0), 1 at Omega = i*I.

    Branch tracked along Omega(t) = (1-t) iI + t Omega with adaptive
    subdivision until consecutive determinant samples turn by < pi/2.
    """
    g = omega.g
    j, k = signature(omega.imag())
    if k != 0:
        raise NotDefiniteHalfSpace(f"Im(Omega) has signature ({j},{k})")
    I = eye(g).m

    def d(t):
        return mp.mpc(0, -1) ** g * _detc((1 - t) * mpc(0, 1) * I + t * omega.m)

    n = 8
    while True:
        vals = [d(mpf(kk) / n) for kk in range(n + 1)]
        if all(v != 0 for v in vals) and \
                all(abs(arg(vals[kk + 1] / vals[kk])) < mpf("1.4") for kk in range(n)):
            break
        n *= 2
        if n > 2 ** 16:
            raise ValidationError("branch tracking failed to stabilize")
    w = mpc(1)
    for kk in range(n):
        w *= sqrt(vals[kk + 1] / vals[kk])
    return w


def _detc(A):
    from mpmath import det as _det
    return _det(A)


def default_cone_vector(M: SymMatrix) -> CVector:
    """Unit eigenvector of M for its negative eigenvalue (deterministic sign)."""
    E, V = M.real().eigsy()
    i0 = min(range(M.g), key=lambda i: E[i])
    b = matrix([V[c, i0] for c in range(M.g)])
    jmax = max(range(M.g), key=lambda i: abs(b[i]))
    if b[jmax] < 0:
        b = -b
    return CVector(b)


def sqrt_det_indefinite(omega: SymMatrix, c: CVector = None):
    """Canonical sqrt(det(-i Omega)) on H_g^(1).

    Uses the cone-vector construction: with M = Im(Omega) and any c with
    conj(c)^T M c < 0, the matrix Omega' = Omega - (2i/(c^T M c)) Mc c^T M is
    definite, and

      sqrt(det(-i Omega)) =
        - sqrt(-c^T M c) * sqrt_det_definite(Omega')
          / sqrt(-(conj(Omega) c)^T Im(-Omega^{-1}) (conj(Omega) c)),

    with both odd square roots canonical (module docstring explains the
    leading minus sign).  The value does not depend on the choice of c.
    """
    g = omega.g
    M = omega.imag()
    try:
        j, k = signature(M)
    except Exception:
        raise NotIndefiniteHalfSpace("Im(Omega) signature not computable")
    if k != 1:
        raise NotIndefiniteHalfSpace(f"Im(Omega) has signature ({j},{k})")
    root_M = CanonicalSqrtMinusQM(M)
    if c is None:
        c = root_M.neg_eigvec
    cMc = bilinear(M, c, c)
    Mc = M.mul_vec(c)
    rank1 = Mc.m * Mc.m.T
    omega_prime = SymMatrix(omega.m - (2j / cMc) * rank1, symmetrize=True)
    Mprime = omega.neg_inverse().imag()
    root_Mp = CanonicalSqrtMinusQM(Mprime)
    w = CVector(omega.conj().m * c.m)
    return -root_M(c) * sqrt_det_definite(omega_prime) / root_Mp(w)
