"""Exception hierarchy shared by the library and the command line interface."""


class ShrinkageError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 2


class ParameterError(ShrinkageError, ValueError):
    """An estimator, signal or experiment parameter is outside its domain."""


class UnknownPresetError(ParameterError):
    """A named experiment preset does not exist."""

    def __init__(self, name: str, valid: list[str]):
        self.name = name
        self.valid = sorted(valid)
        super().__init__(
            f"unknown preset '{name}', valid presets are: {', '.join(self.valid)}"
        )


class DimensionError(ShrinkageError, ValueError):
    """Two vectors (or a vector and a matrix) have incompatible lengths."""


class NumericalDivergenceError(ShrinkageError, ArithmeticError):
    """An iterative solver produced non-finite values."""

    def __init__(self, iteration: int, message: str = "", diagnostics: dict = None):
        self.iteration = iteration
        self.diagnostics = diagnostics or {}
        detail = message or "non-finite values in iterate"
        super().__init__(f"iteration {iteration}: {detail} {self.diagnostics}".strip())


class InputOutputError(ShrinkageError):
    """Reading or writing a file failed."""

    exit_code = 3

    def __init__(self, path, reason: str):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")


class ParseError(ShrinkageError):
    """A text input could not be parsed."""

    exit_code = 4

    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {reason}")


class VectorParseError(ParseError):
    """A vector file contains a line that is not a decimal number."""


class ConfigParseError(ParseError):
    """A config file contains a line that is not ``key = value``."""
