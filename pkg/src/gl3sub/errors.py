"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 2 for bad input or data,
3 for a parameter-window violation, 4 for an exhausted compute budget.
"""


class Gl3Error(Exception):
    exit_code = 1


class InputError(Gl3Error, ValueError):
    exit_code = 2


class FormatError(InputError):
    pass


class NormalizationError(InputError):
    pass


class InsufficientData(InputError):
    pass


class NonCuspidalTable(InputError):
    pass


class WindowViolation(Gl3Error, ValueError):
    exit_code = 3


class ContourOutOfRange(WindowViolation):
    pass


class BudgetExceeded(Gl3Error, RuntimeError):
    exit_code = 4


class QuadratureNonConvergence(BudgetExceeded):
    pass


class PoleEncountered(Gl3Error, ZeroDivisionError):
    pass


class DegenerateDerivative(Gl3Error, ValueError):
    pass


class StationaryPointInside(Gl3Error, ValueError):
    pass


class NoInteriorStationaryPoint(Gl3Error, ValueError):
    pass


class NonPositiveSecondDerivative(Gl3Error, ValueError):
    pass


class ConditionFViolated(UserWarning):
    """Grid check of the 2-D second-derivative condition failed (non-fatal)."""
