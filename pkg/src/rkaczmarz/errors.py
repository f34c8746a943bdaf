"""Exception hierarchy shared by all modules."""


class KaczmarzError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(KaczmarzError, ValueError):
    pass


class ParameterError(KaczmarzError, ValueError):
    pass


class DomainError(KaczmarzError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class DegenerateRowError(KaczmarzError, ValueError):
    def __init__(self, row, message=None):
        self.row = row
        super().__init__(message or f"row {row} has zero norm")


class SingularMatrixError(KaczmarzError, ArithmeticError):
    def __init__(self, sigma_min, sigma_max):
        self.sigma_min = sigma_min
        self.sigma_max = sigma_max
        super().__init__(
            f"matrix is numerically rank deficient: sigma_min={sigma_min:.3e}, "
            f"sigma_max={sigma_max:.3e}"
        )


class NumericalFailure(KaczmarzError, ArithmeticError):
    """An iterative routine broke down or exhausted its budget."""


class EnumerationBudgetError(KaczmarzError, ValueError):
    pass


class InputError(KaczmarzError, ValueError):
    """Malformed user input such as unsorted nodes or a bad config file."""
