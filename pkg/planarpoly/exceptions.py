"""
Error hierarchy.

Library code raises; only the command line turns these into exit codes.
Exit code 2 means the request was invalid, exit code 3 means a numerical
tolerance could not be met.
"""


class PlanarError(Exception):
    exit_code = 1

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_record(self):
        return {
            'error': type(self).__name__,
            'message': self.message,
            'exit_code': self.exit_code,
            'context': {key: _plain(value) for key, value in self.context.items()},
        }


# --- Validation failures (exit code 2) ---

class ValidationError(PlanarError):
    exit_code = 2


class ParameterRangeError(ValidationError):
    pass


class DomainError(ValidationError):
    """Argument lies on (or within tolerance of) a branch cut."""


class PoleError(ValidationError):
    """Gamma or Barnes G evaluated at a pole / zero."""


class StrongRegimeError(ValidationError):
    """Operation needs z0 > 1, i.e. x^2 (1 + c) < 1."""


# --- Numerical failures (exit code 3) ---

class NumericalError(PlanarError):
    exit_code = 3


class ConvergenceError(NumericalError):
    pass


class AccuracyError(NumericalError):
    pass


class SingularMatrixError(NumericalError):
    pass


class IllConditionedError(NumericalError):
    pass


class BracketError(NumericalError):
    pass


class ContourPlacementError(NumericalError):
    pass


class PainlevePoleError(NumericalError):
    pass


class SignAmbiguityError(NumericalError):
    pass


# --- Warnings ---

class ConditioningWarning(UserWarning):
    pass


class VarianceWarning(UserWarning):
    pass


def _plain(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)
