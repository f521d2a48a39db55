"""tropic: exact rational toolkit for maxout arrangements and Minkowski sums."""

__version__ = "0.1.0"

from .geometry import (
    ConstraintSystem,
    EmptyPolyhedronError,
    RecessionProfile,
    affine_dimension,
    contains,
    euler_characteristic,
    feasible,
    recession_profile,
    strictly_feasible,
)
from .linprog import BudgetExceededError

__all__ = [
    "BudgetExceededError",
    "ConstraintSystem",
    "EmptyPolyhedronError",
    "RecessionProfile",
    "affine_dimension",
    "contains",
    "euler_characteristic",
    "feasible",
    "recession_profile",
    "strictly_feasible",
    "__version__",
]
