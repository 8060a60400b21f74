class MeanFixError(Exception):
    """Root of every error raised by meanfix."""


class DomainError(MeanFixError, ValueError):
    """A point lies outside the ball (or interval) a map is defined on."""


class DimensionMismatchError(MeanFixError, ValueError):
    pass


class WeightError(MeanFixError, ValueError):
    """Multi-index or convex weights violate their invariants."""


class NonFiniteError(MeanFixError, ArithmeticError):
    pass


class InnerIterationLimitError(MeanFixError, RuntimeError):
    """The anchored Picard loop did not settle; the map is probably expansive."""


class ConditionRefusedError(MeanFixError, ValueError):
    pass


class DegenerateSamplingError(MeanFixError, RuntimeError):
    pass


class InconsistentConditionError(MeanFixError, AssertionError):
    pass


class UnknownExampleError(MeanFixError, KeyError):
    pass


class ConfigError(MeanFixError, ValueError):
    pass
