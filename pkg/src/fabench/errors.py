"""Exception types shared across the package.

The CLI maps these onto its exit-code contract (see cli module), so new
error conditions should reuse one of the classes below rather than raising
bare ValueError.
"""


class FabenchError(Exception):
    """Base class for all package errors."""


class DomainError(FabenchError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ShapeError(FabenchError, ValueError):
    """Array shapes are inconsistent with each other or with a bank."""


class FormatError(FabenchError):
    """A file is not in a supported format (bad WAV codec, bad FAB1 magic)."""


class EmptyInputError(FabenchError, ValueError):
    """Input is empty or too short for the requested operation."""


class DataError(FabenchError, ValueError):
    """Input data is semantically invalid (bad CSV rows, missing scores)."""


class QuotaError(DataError):
    """A sampling quota cannot be met; message names the offending group."""


class ConfigError(FabenchError, ValueError):
    """An unknown front-end name or invalid configuration was requested."""


class NumericError(FabenchError, ArithmeticError):
    """A numeric computation diverged (non-finite loss, failed inversion)."""
