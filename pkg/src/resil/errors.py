"""Exception types raised by the resilience engine."""


class ResilError(ValueError):
    """Base class for all input and validation errors."""


class SeriesError(ResilError):
    pass


class WrongLengthError(SeriesError):
    pass


class NonFiniteError(SeriesError):
    pass


class NegativeValueError(SeriesError):
    pass


class OutOfRangeError(SeriesError):
    pass


class IndexOutOfRangeError(ResilError, IndexError):
    pass


class InvalidInputError(ResilError):
    pass


class EmptySubsetError(ResilError):
    pass


class EmptyGridError(ResilError):
    pass


class ConfigError(ResilError):
    """Bad configuration value; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
