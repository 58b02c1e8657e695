"""Custom exceptions for the meta-RL bounds laboratory."""

from typing import Optional, Tuple


class MetaBoundError(Exception):
    """Base exception for the laboratory."""

    pass


class ConfigurationError(MetaBoundError):
    """Configuration-related errors."""

    pass


class MissingConfigError(ConfigurationError):
    """Required configuration is missing."""

    pass


class InvalidConfigError(ConfigurationError):
    """Configuration is invalid."""

    pass


class UsageError(MetaBoundError):
    """Command line used incorrectly."""

    pass


class InvalidArgumentError(MetaBoundError, ValueError):
    """An operation was called outside its preconditions."""

    pass


class InsufficientDataError(MetaBoundError):
    """Not enough samples, tasks or history for the requested statistic."""

    pass


class NumericalError(MetaBoundError):
    """Numerical computation failed."""

    pass


class DimensionError(NumericalError):
    """Array shapes do not agree."""

    pass


class SolverError(NumericalError):
    """An iterative solver did not reach its residual threshold."""

    pass


class DivergenceError(NumericalError):
    """Training produced a non-finite loss or gradient."""

    def __init__(self, message: str, iteration: Optional[int] = None):
        super().__init__(message)
        self.iteration = iteration


class HarnessError(MetaBoundError):
    """Experiment orchestration errors."""

    pass


class SeedCollisionError(HarnessError):
    """Two sweep cells derived the same seed."""

    pass


class CellFailedError(HarnessError):
    """A sweep cell failed; carries its coordinates."""

    def __init__(self, message: str, coordinates: Tuple[float, int, int]):
        super().__init__(message)
        self.coordinates = coordinates

    def __reduce__(self):  # keep coordinates across process pools
        return (self.__class__, (self.args[0], self.coordinates))


class ExportError(HarnessError):
    """Reading or writing a result file failed."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path
