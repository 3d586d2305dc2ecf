"""Complex symmetric matrices, vectors, quadratic forms, Siegel half-space
predicates and the symplectic action.

Entries are mpmath numbers; constructors accept ints, Fractions, floats,
mpmath numbers, or decimal strings (the string route is what makes test
vectors bit-exact at a given working precision).
"""
from __future__ import annotations

from fractions import Fraction

from mpmath import mp, mpf, mpc, matrix, eigsy, det as mp_det, inverse as mp_inverse

from .errors import (DimensionMismatch, NearSingular, NotDefiniteHalfSpace,
                     NotSymplectic, SingularDenominator, ValidationError)


def to_mp(x):
    """Convert a scalar-ish value to mpf/mpc at the current precision."""
    if isinstance(x, (mpf, mpc)):
        return x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / mpf(x.denominator)
    if isinstance(x, complex):
        return mpc(x.real, x.imag)
    if isinstance(x, tuple) and len(x) == 2:
        return mpc(to_mp(x[0]), to_mp(x[1]))
    return mpf(x)


class CVector:
    """Complex g-vector; thin wrapper over an mpmath column matrix."""

    __slots__ = ("g", "m")

    def __init__(self, entries):
        if isinstance(entries, matrix):
            self.m = entries.copy()
            self.g = entries.rows
        else:
            vals = [to_mp(e) for e in entries]
            self.g = len(vals)
            self.m = matrix(vals)

    def __getitem__(self, i):
        return self.m[i]

    def __len__(self):
        return self.g

    def __iter__(self):
        return (self.m[i] for i in range(self.g))

    def __neg__(self):
        return CVector(-self.m)

    def __add__(self, other):
        return CVector(self.m + other.m)

    def __sub__(self, other):
        return CVector(self.m - other.m)

    def scale(self, a):
        return CVector(a * self.m)

    def conj(self):
        return CVector(self.m.conjugate())

    def real(self):
        return CVector(matrix([mp.re(self.m[i]) for i in range(self.g)]))

    def imag(self):
        return CVector(matrix([mp.im(self.m[i]) for i in range(self.g)]))

    def is_real(self, tol=0):
        return all(abs(mp.im(self.m[i])) <= tol for i in range(self.g))

    def dot(self, other):
        """Plain (non-conjugated) dot product v^T w."""
        return sum(self.m[i] * other.m[i] for i in range(self.g))

    def norm(self):
        return mp.sqrt(sum(abs(self.m[i]) ** 2 for i in range(self.g)))

    def tolist(self):
        return [self.m[i] for i in range(self.g)]

    def __repr__(self):
        return f"CVector({self.tolist()})"


class SymMatrix:
    """Complex symmetric g x g matrix Omega = N + iM."""

    __slots__ = ("g", "m")

    def __init__(self, rows, symmetrize=False, tol=None):
        if isinstance(rows, matrix):
            A = rows.copy()
        else:
            A = matrix([[to_mp(x) for x in row] for row in rows])
        if A.rows != A.cols:
            raise DimensionMismatch(f"matrix must be square, got {A.rows}x{A.cols}")
        g = A.rows
        scale = max([abs(A[i, j]) for i in range(g) for j in range(g)] + [mpf(1)])
        if tol is None:
            tol = mpf(10) ** (-(mp.dps - 3)) * scale
        for i in range(g):
            for j in range(i + 1, g):
                if abs(A[i, j] - A[j, i]) > tol:
                    if not symmetrize:
                        raise ValidationError(
                            f"matrix not symmetric at ({i},{j}): {A[i, j]} vs {A[j, i]}")
                s = (A[i, j] + A[j, i]) / 2
                A[i, j] = s
                A[j, i] = s
        self.g = g
        self.m = A

    def __getitem__(self, idx):
        return self.m[idx]

    def entry(self, i, j):
        return self.m[i, j]

    def real(self):
        return SymMatrix(matrix([[mp.re(self.m[i, j]) for j in range(self.g)]
                                 for i in range(self.g)]))

    def imag(self):
        return SymMatrix(matrix([[mp.im(self.m[i, j]) for j in range(self.g)]
                                 for i in range(self.g)]))

    def conj(self):
        return SymMatrix(self.m.conjugate())

    def is_real(self, tol=0):
        return all(abs(mp.im(self.m[i, j])) <= tol
                   for i in range(self.g) for j in range(self.g))

    def scale(self, a):
        return SymMatrix(a * self.m, symmetrize=True)

    def add(self, other):
        return SymMatrix(self.m + other.m, symmetrize=True)

    def mul_vec(self, v: CVector) -> CVector:
        if v.g != self.g:
            raise DimensionMismatch(f"dim {v.g} vector with {self.g}x{self.g} matrix")
        return CVector(self.m * v.m)

    def det(self):
        return mp_det(self.m)

    def inverse(self):
        try:
            return SymMatrix(mp_inverse(self.m), symmetrize=True)
        except ZeroDivisionError:
            raise SingularDenominator("matrix is singular")

    def neg_inverse(self):
        return SymMatrix(-mp_inverse(self.m), symmetrize=True)

    def frobenius(self):
        return mp.sqrt(sum(abs(self.m[i, j]) ** 2
                           for i in range(self.g) for j in range(self.g)))

    def eigsy(self):
        """Eigenvalues/eigenvectors; only valid for real symmetric content."""
        E, V = eigsy(self.m)
        return E, V

    def tolist(self):
        return [[self.m[i, j] for j in range(self.g)] for i in range(self.g)]

    def __repr__(self):
        return f"SymMatrix({self.tolist()})"


def quad_form(lam: SymMatrix, v: CVector):
    """Q_Lambda(v) = (1/2) v^T Lambda v."""
    if lam.g != v.g:
        raise DimensionMismatch(f"dim {v.g} vector with {lam.g}x{lam.g} matrix")
    return v.dot(lam.mul_vec(v)) / 2


def bilinear(lam: SymMatrix, u: CVector, v: CVector):
    """u^T Lambda v (no 1/2)."""
    return u.dot(lam.mul_vec(v))


def signature(M: SymMatrix, singular_threshold=None):
    """(j, k) = (# positive, # negative) eigenvalues of a real symmetric M.

    Raises NearSingular when an eigenvalue falls below the threshold
    (default 10^(-dps/2), relative to the matrix scale).
    """
    if not M.is_real(tol=mpf(10) ** (-(mp.dps - 3)) * (M.frobenius() + 1)):
        raise ValidationError("signature requires a real symmetric matrix")
    E, _ = M.real().eigsy()
    scale = max(abs(e) for e in E)
    if scale == 0:
        raise NearSingular("zero matrix")
    if singular_threshold is None:
        singular_threshold = mpf(10) ** (-mp.dps // 2)
    thr = singular_threshold * max(scale, mpf(1))
    j = k = 0
    for e in E:
        if abs(e) <= thr:
            raise NearSingular(f"eigenvalue {e} below threshold {thr}")
        if e > 0:
            j += 1
        else:
            k += 1
    return j, k


def siegel_member(omega: SymMatrix, k: int) -> bool:
    """True iff omega is symmetric with Im(omega) of signature (g-k, k)."""
    try:
        j_, k_ = signature(omega.imag())
    except NearSingular:
        raise
    return k_ == k


def _check_symplectic(A, B, C, D, g):
    # G^T J G = J, J = ((0,-I),(I,0)); exact for integer input, tol otherwise
    G = matrix(2 * g, 2 * g)
    for i in range(g):
        for j in range(g):
            G[i, j] = to_mp(A[i][j] if not isinstance(A, matrix) else A[i, j])
            G[i, j + g] = to_mp(B[i][j] if not isinstance(B, matrix) else B[i, j])
            G[i + g, j] = to_mp(C[i][j] if not isinstance(C, matrix) else C[i, j])
            G[i + g, j + g] = to_mp(D[i][j] if not isinstance(D, matrix) else D[i, j])
    J = matrix(2 * g, 2 * g)
    for i in range(g):
        J[i, i + g] = mpf(-1)
        J[i + g, i] = mpf(1)
    R = G.T * J * G - J
    scale = max([abs(G[i, j]) for i in range(2 * g) for j in range(2 * g)] + [mpf(1)])
    tol = mpf(10) ** (-(mp.dps - 5)) * scale ** 2
    if max(abs(R[i, j]) for i in range(2 * g) for j in range(2 * g)) > tol:
        raise NotSymplectic("block matrix is not symplectic")
    return G


def sp_action(A, B, C, D, omega: SymMatrix) -> SymMatrix:
    """Fractional linear action (A omega + B)(C omega + D)^(-1)."""
    g = omega.g
    _check_symplectic(A, B, C, D, g)
    Am = matrix([[to_mp(A[i][j]) for j in range(g)] for i in range(g)])
    Bm = matrix([[to_mp(B[i][j]) for j in range(g)] for i in range(g)])
    Cm = matrix([[to_mp(C[i][j]) for j in range(g)] for i in range(g)])
    Dm = matrix([[to_mp(D[i][j]) for j in range(g)] for i in range(g)])
    num = Am * omega.m + Bm
    den = Cm * omega.m + Dm
    try:
        deninv = mp_inverse(den)
    except ZeroDivisionError:
        raise SingularDenominator("C*Omega + D is singular")
    return SymMatrix(num * deninv, symmetrize=True)


def eye(g) -> SymMatrix:
    m = matrix(g, g)
    for i in range(g):
        m[i, i] = mpf(1)
    return SymMatrix(m)
