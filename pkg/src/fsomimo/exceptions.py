"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula.

    ``name`` identifies the offending argument (``"xi^2"``, ``"A0"`` ...) so
    callers such as the CLI can report the violated constraint in one line.
    """

    def __init__(self, message, name=None):
        super().__init__(message)
        self.name = name


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of its evaluation budget.

    The best estimate reached so far is kept on the exception.
    """

    def __init__(self, message, value, abs_error_estimate, evaluations):
        super().__init__(message)
        self.value = value
        self.abs_error_estimate = abs_error_estimate
        self.evaluations = evaluations


class ConvergenceError(RuntimeError):
    """A root finder or minimizer could not satisfy its contract."""


class ModelRangeWarning(UserWarning):
    """A closed form returned a value outside [0, 1] (not a probability)."""


class PaperDiscrepancyWarning(UserWarning):
    """A verbatim published formula disagrees with its re-derived counterpart."""
