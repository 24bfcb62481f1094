"""Exception types shared across the package."""


class HororadonError(Exception):
    """Base class."""


class NonUnimodular(HororadonError, ValueError):
    pass


class TraceNotZero(HororadonError, ValueError):
    pass


class DomainViolation(HororadonError, ValueError):
    pass


class PoleError(HororadonError, ValueError):
    """Gamma evaluated at a nonpositive integer."""


class PoleAtZero(HororadonError, ValueError):
    """c-function requested at lambda = 0."""


class TailToleranceExceeded(HororadonError, ArithmeticError):
    """Integrand still too large at the truncation point."""


class QuadratureUnderresolved(HororadonError, ArithmeticError):
    """Refinement check or tail estimate failed."""


class NotPositiveDefinite(HororadonError, ValueError):
    pass


class NonSymmetricTangent(HororadonError, ValueError):
    pass


class ConfigError(HororadonError, ValueError):
    pass
