"""Exact-arithmetic toolkit for simultaneous approximation on polynomial curves.

Everything here computes with integers and fractions; floating point
appears only in diagnostic ratios and formatted output.  The package
splits into curve analysis (polycurve), one-dimensional machinery
(contfrac, reals), record scanning and certification (engine),
construction of reals with prescribed behaviour (factory), and
serialization plus a command-line front end (reports, cli).
"""

from .contfrac import (Convergent, Decomposition, Lambda1Estimate, cf_expand,
                       convergents, decompose, dist_to_int, lambda1_estimate)
from .engine import (ApproxRecord, CertRecord, CertifySummary, JoxReport,
                     NkoroResult, SearchReport, ThetaEstimate, certify_scan,
                     check_multiplicativity, check_nkoro,
                     convergent_image_check, eval_error, exhaustive_search,
                     structural_search, theta_estimate, verify_theorem_jox)
from .errors import (CertificateViolationError, CurveFormatError,
                     DimensionMismatchError, DiocurveError, EnclosureError,
                     InsufficientDepthError, PreconditionError,
                     RealFormatError, SingularMatrixError)
from .factory import (MembershipReport, PsiConstruction, PsiSpec,
                      WitnessCheck, make_lambda1, make_prescribed_psi,
                      verify_membership)
from .poly import RatPoly, X, format_poly, parse_poly
from .polycurve import (BoundResult, Curve, CurveProfile, IntegerizedCurve,
                        Normalization, c0_constant, dimension_bounds,
                        format_curve, integerize, normalize, parse_curve,
                        profile)
from .reals import (DyadicSeries, ExactRational, PartialQuotients,
                    ProgrammaticReal, geometric_dyadic, parse_real)

__version__ = "0.1.0"

__all__ = [
    "ApproxRecord", "BoundResult", "CertRecord", "CertificateViolationError",
    "CertifySummary", "Convergent", "Curve", "CurveFormatError",
    "CurveProfile", "Decomposition", "DimensionMismatchError",
    "DiocurveError", "DyadicSeries", "EnclosureError", "ExactRational",
    "InsufficientDepthError", "IntegerizedCurve", "JoxReport",
    "Lambda1Estimate", "MembershipReport", "NkoroResult", "Normalization",
    "PartialQuotients", "PreconditionError", "ProgrammaticReal",
    "PsiConstruction", "PsiSpec", "RatPoly", "RealFormatError",
    "SearchReport", "SingularMatrixError", "ThetaEstimate", "WitnessCheck",
    "X", "c0_constant", "certify_scan", "cf_expand", "check_multiplicativity",
    "check_nkoro", "convergent_image_check", "convergents", "decompose",
    "dimension_bounds", "dist_to_int", "eval_error", "exhaustive_search",
    "format_curve", "format_poly", "geometric_dyadic", "integerize",
    "lambda1_estimate", "make_lambda1", "make_prescribed_psi", "normalize",
    "parse_curve", "parse_poly", "parse_real", "profile",
    "structural_search", "theta_estimate", "verify_membership",
    "verify_theorem_jox", "__version__",
]
