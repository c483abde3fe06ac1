"""Exception hierarchy shared across the package."""


class EmtwinError(Exception):
    """Base class for all package errors."""


class DomainError(EmtwinError, ValueError):
    """Input outside the mathematical domain of an operation."""


class GrazingIncidenceError(DomainError):
    """Incidence angle too close to grazing for a stable reflection solve."""


class ValidationError(EmtwinError, ValueError):
    """Structured input (scene, config, dataset) failed validation.

    ``problems`` lists every violation found, not just the first.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(EmtwinError, ValueError):
    """File could not be parsed; carries location context when known."""


class SingularSystemError(EmtwinError, ValueError):
    """Linear system too close to singular to solve reliably."""

    def __init__(self, message, abs_det):
        super().__init__(f"{message} (|det|={abs_det:.3e})")
        self.abs_det = abs_det


class NumericalError(EmtwinError, ArithmeticError):
    """Non-finite values or a diverged iteration."""
