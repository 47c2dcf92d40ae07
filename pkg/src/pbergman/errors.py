"""Exception hierarchy.

Every exception carries a short machine-readable ``code`` so the command
line front end can report failures without parsing messages.
"""


class PBergmanError(Exception):
    code = "error"


class ParameterError(PBergmanError, ValueError):
    code = "parameter"


class GeometryError(PBergmanError, ValueError):
    code = "geometry"


class UnsupportedDomainError(PBergmanError, NotImplementedError):
    code = "unsupported-domain"


class EmptyRegionError(PBergmanError, ValueError):
    code = "empty-region"


class IllConditionedError(PBergmanError, ArithmeticError):
    code = "ill-conditioned"


class RankError(PBergmanError, ArithmeticError):
    code = "rank"


class ConvergenceError(PBergmanError, RuntimeError):
    """Raised when an iteration stops before meeting its tolerance.

    The last iterate is attached as ``last`` so callers can still inspect it.
    """

    code = "convergence"

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class StepSizeError(PBergmanError, ArithmeticError):
    code = "step-size"


class RangeError(PBergmanError, ValueError):
    code = "range"


class CounterexampleViolation(PBergmanError, AssertionError):
    code = "counterexample-violation"


class ConfigError(PBergmanError, ValueError):
    code = "config"
