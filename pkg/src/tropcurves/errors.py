"""Exception types shared across the package."""


class TropCurvesError(Exception):
    """Base class for all package errors."""

    code = "error"


class PrecisionLoss(TropCurvesError):
    """A truncated series no longer determines its leading term."""

    code = "precision_loss"


class ZeroInverse(TropCurvesError, ZeroDivisionError):
    code = "zero_inverse"


class ZeroDivisor(TropCurvesError, ZeroDivisionError):
    code = "zero_divisor"


class UnknownLabel(TropCurvesError, KeyError):
    code = "unknown_label"

    def __str__(self):
        return Exception.__str__(self)


class DuplicatePoint(TropCurvesError, ValueError):
    code = "duplicate_point"


class InvalidDegree(TropCurvesError, ValueError):
    code = "invalid_degree"


class InvalidInput(TropCurvesError, ValueError):
    code = "invalid_input"


class NonIntegralDirection(TropCurvesError, ValueError):
    code = "non_integral_direction"


class OnBoundary(TropCurvesError, ValueError):
    code = "on_boundary"


class AsymmetricInput(TropCurvesError, ValueError):
    code = "asymmetric_input"


class DimensionMismatch(TropCurvesError, ValueError):
    code = "dimension_mismatch"


class Degenerate(TropCurvesError):
    """Constraints are not generic enough for an exact tropical count."""

    code = "degenerate"
