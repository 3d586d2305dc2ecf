"""Exception hierarchy for thetazeta.

Every failure mode that callers are expected to handle gets its own class;
they all derive from ThetaZetaError so the CLI can map them to exit codes.
"""


class ThetaZetaError(Exception):
    """Base class for all library errors."""


class ValidationError(ThetaZetaError):
    """Malformed input (bad parameter file, wrong shapes, unparseable numbers)."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DimensionMismatch(ValidationError):
    pass


class PrecisionFailure(ThetaZetaError):
    """A computation could not reach the requested accuracy."""


class PrecisionExhausted(PrecisionFailure):
    pass


class PrecisionTooLow(PrecisionFailure):
    pass


class QuadratureStalled(PrecisionFailure):
    pass


class ImaginaryResidue(PrecisionFailure):
    """A value that should be real came out with a large imaginary part."""


class NearSingular(ThetaZetaError):
    pass


class NotSymplectic(ValidationError):
    pass


class SingularDenominator(ThetaZetaError):
    pass


class NotDefiniteHalfSpace(ValidationError):
    pass


class NotIndefiniteHalfSpace(ValidationError):
    pass


class OutsideRegion(ValidationError):
    """Argument outside the domain R_M of the canonical square root."""


class ConeViolation(ValidationError):
    """Cone parameter fails conj(c)^T M c < 0."""


class NonRealConeWithAbsPow(ValidationError):
    """|u|^r test functions require real cone parameters."""


class DomainError(ValidationError):
    pass


class OutsideDomain(DomainError):
    """2F1 argument outside { |z| < 1 } u { Re z < 1/2 } u { 1 }."""


class NonConvergent(ThetaZetaError):
    pass


class DivergentRegion(DomainError):
    """Dirichlet-series evaluation requested outside its convergence region."""


class NotPStable(ValidationError):
    pass


class NotUnimodular(ValidationError):
    pass


class NotStable(ValidationError):
    """Unit does not preserve the given lattice."""


class NotCoprime(ValidationError):
    pass


class CRTFailure(ThetaZetaError):
    pass


class SearchBound(ThetaZetaError):
    """Search exceeded its configured cap."""


class DegenerateBasis(ValidationError):
    pass


class DependentRows(ValidationError):
    pass


class NoCandidate(ThetaZetaError):
    """Recognition produced no polynomial passing the acceptance thresholds."""
