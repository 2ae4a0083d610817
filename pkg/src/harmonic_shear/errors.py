"""Exception types raised across the package."""


class ShearError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ShearError, ValueError):
    pass


class DomainError(ShearError, ValueError):
    """Argument lies outside the region where a function is defined."""


class PoleError(ShearError, ArithmeticError):
    """Evaluation hit a singular point (prevertex or root of 1 - omega)."""


class UnsupportedParametersError(ShearError, ValueError):
    """Parameters fall outside the supported evaluation branch."""


class NotLiftableError(ShearError, ValueError):
    """Dilatation has no analytic square root, so no minimal surface lift."""


class NoOracleError(ShearError, ValueError):
    """No closed-form reference is available for the requested dilatation."""
