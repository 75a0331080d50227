"""Exception hierarchy for e2surf."""


class E2SurfError(Exception):
    """Base class for all errors raised by this package."""


class NonFinite(E2SurfError, ArithmeticError):
    """An ODE right-hand side produced NaN or inf."""


class NoSignChange(E2SurfError, ValueError):
    """A root bracket does not contain a sign change."""


class NoConvergence(E2SurfError, ArithmeticError):
    """An adaptive scheme hit its refinement limit."""


class NoRoot(E2SurfError, ArithmeticError):
    pass


class PotentialVanishes(E2SurfError, ValueError):
    """The zero-potential R(g) is numerically zero at the Gauss map value."""


class GaussMapAtPole(E2SurfError, ValueError):
    pass


class DegenerateMetric(E2SurfError, ValueError):
    pass


class InvalidK(E2SurfError, ValueError):
    pass


class OutsideOmega(E2SurfError, ValueError):
    """(c, theta) is outside the admissible parameter domain."""


class PositivityViolated(E2SurfError, ArithmeticError):
    pass


class BracketingFailed(E2SurfError, ArithmeticError):
    pass


class PeriodObstruction(E2SurfError, ValueError):
    """The period function H(c, theta) is not zero, so the annulus does not close."""


class InsufficientSamples(E2SurfError, ValueError):
    pass


class ConfigError(E2SurfError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
