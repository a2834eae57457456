"""Exception hierarchy shared by the analysis and simulation modules."""


class SurvivalError(Exception):
    """Base class for all errors raised by :mod:`wlogrank`."""


class ValidationError(SurvivalError, ValueError):
    """Input data or parameters violate a precondition."""


class NoEventsError(ValidationError):
    """The data contain no observed events."""


class DegenerateError(SurvivalError, ArithmeticError):
    """An analysis cannot produce a standardized statistic."""


class DegenerateVarianceError(DegenerateError):
    """The variance of the test statistic is zero."""


class DegenerateWeightsError(DegenerateError):
    """Every weight in a weight scheme is zero."""
