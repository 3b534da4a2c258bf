"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to converge within its budget.

    Carries diagnostics so callers can report which integral went wrong.
    """

    def __init__(self, message, value=None, error=None, neval=None):
        super().__init__(message)
        self.value = value
        self.error = error
        self.neval = neval

    def __str__(self):
        base = super().__str__()
        return (f"{base} (value~{self.value!r}, err~{self.error!r}, "
                f"neval={self.neval!r})")
