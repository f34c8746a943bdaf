"""Randomized Kaczmarz solvers with squared-row-norm sampling, baselines and predictors."""
__version__ = "0.1.0"

from .errors import (
    DegenerateRowError,
    DimensionError,
    DomainError,
    EnumerationBudgetError,
    InputError,
    KaczmarzError,
    NumericalFailure,
    ParameterError,
    SingularMatrixError,
)
from .matcore import ConditionReport, condition_numbers, singular_values
from .randsrc import RngStream, WeightedIndexDistribution, build_row_distribution, derive_stream
from .solvers import (
    IterateTrace,
    LinearSystem,
    SolverOptions,
    cgls,
    kaczmarz_cyclic,
    kaczmarz_randomized,
    kaczmarz_relaxed,
    project_row,
)
