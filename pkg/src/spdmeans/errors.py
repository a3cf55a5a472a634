"""Exception types raised across the package."""


class SpdMeansError(ValueError):
    """Base class for all validation and domain errors in this package."""


class NotHermitianError(SpdMeansError):
    """Input matrix deviates from its conjugate transpose beyond tolerance."""


class NotPositiveDefiniteError(SpdMeansError):
    """Input matrix has a non-positive eigenvalue."""


class DomainError(SpdMeansError):
    """A matrix function (log, sqrt, negative power) was applied outside its domain."""


class DimensionMismatchError(SpdMeansError):
    """Operands have incompatible shapes."""


class NegativeBracketError(SpdMeansError):
    """A trace bracket that must be nonnegative came out negative beyond the
    roundoff clamp, signalling corrupted upstream input."""


class ZeroExponentError(SpdMeansError):
    """Power mean called with exponent 0; the limit is the log-Euclidean mean."""


class ParameterError(SpdMeansError):
    """A scalar parameter (geodesic time, compound order) is out of range."""


class ComplexSpectrumError(SpdMeansError):
    """Eigenvalues carry imaginary parts beyond tolerance where a real
    positive spectrum is required."""


class LengthMismatchError(SpdMeansError):
    """Spectra passed to a majorization check have different lengths."""


class IncompatibleInstanceError(SpdMeansError):
    """A verification check received a problem it is not defined for
    (wrong matrix count or weights)."""
