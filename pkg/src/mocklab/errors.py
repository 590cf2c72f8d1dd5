"""Exception types shared across the package."""


class MocklabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MocklabError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class PrecisionError(MocklabError, ValueError):
    """Requested evaluation cannot be resolved at the working precision."""


class NonConvergenceError(MocklabError, ArithmeticError):
    """A series or quadrature failed to meet its stop rule within limits."""


class PoleProximityError(DomainError):
    """An integration ray passes too close to a pole of the integrand."""


class ExtrapolationInstability(MocklabError, ArithmeticError):
    """Lateral-limit residuals fail to decrease along the requested sequence."""
