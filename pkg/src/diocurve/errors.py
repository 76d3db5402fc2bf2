"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: format errors exit 1,
precondition/hypothesis rejections exit 2, certification failures exit 3.
"""


class DiocurveError(Exception):
    """Base class for all package-specific errors."""


class CurveFormatError(DiocurveError):
    """Malformed curve file or curve construction input."""


class RealFormatError(DiocurveError):
    """Malformed programmatic-real specification."""


class DimensionMismatchError(DiocurveError):
    """Two curves of different ambient dimension were combined."""


class SingularMatrixError(DiocurveError):
    """A matrix required to be invertible is singular."""


class PreconditionError(DiocurveError):
    """A documented precondition or theorem hypothesis does not hold."""


class EnclosureError(DiocurveError):
    """An interval enclosure is too wide to certify a comparison.

    The caller must deepen the truncation of the programmatic real.
    """


class InsufficientDepthError(EnclosureError):
    """The requested truncation depth exceeds what the real can provide."""


class CertificateViolationError(DiocurveError):
    """A divisibility certificate failed.  This must never happen; a raise
    here means either the arithmetic or the underlying statement is wrong."""
