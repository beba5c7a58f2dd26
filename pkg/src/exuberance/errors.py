"""Exception hierarchy.

Every error carries the CLI exit code of its family so the command-line
layer can map failures without inspecting messages.
"""


class ExuberanceError(Exception):
    exit_code = 1
    module = "exuberance"

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class InputError(ExuberanceError, ValueError):
    exit_code = 2


class NumericalError(ExuberanceError, ArithmeticError):
    exit_code = 3


class ConfigError(ExuberanceError, ValueError):
    exit_code = 4


# -- series_store ----------------------------------------------------------

class MalformedRow(InputError):
    module = "series"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingValue(MalformedRow):
    pass


class InputFileError(InputError):
    module = "series"


class MissingColumn(InputError):
    module = "series"


class NonMonotonicDates(InputError):
    module = "series"


class IrregularDates(InputError):
    module = "series"


class EmptyInput(InputError):
    module = "series"


class EmptyRange(InputError):
    module = "series"


# -- numerical core --------------------------------------------------------

class SeriesTooShort(InputError):
    module = "dickey_fuller"


class WindowTooSmall(ConfigError):
    module = "dickey_fuller"


class DegenerateRegression(NumericalError):
    module = "dickey_fuller"


class AllWindowsDegenerate(NumericalError):
    module = "recursive"


class EmptyDraws(NumericalError):
    module = "critical_values"


class SimulationFailed(NumericalError):
    module = "critical_values"


class LengthMismatch(NumericalError):
    module = "datestamp"


class InvalidSpec(ConfigError):
    module = "dgp"
