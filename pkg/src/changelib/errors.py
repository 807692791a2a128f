class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class InfeasibleConfigError(InvalidInputError):
    """A generation or experiment configuration has no valid realisation."""


class DegenerateInputError(ValueError):
    """The inputs carry no two distinct values."""


class DegenerateWindowError(ValueError):
    """A window is too short to form the operands an operation needs."""


class GridTooFineError(ValueError):
    """A grid would place less than one sample per segment."""


class NoSignalError(RuntimeError):
    """Every grid scored zero, so the weighted combination is undefined."""


class UnsupportedProcessError(NotImplementedError):
    """A process oracle cannot provide the requested stratum."""


class SeriesParseError(ValueError):
    """A sequence or truth file could not be parsed."""
