"""Right-sided weighted Gauss-Radau quadrature on (-1, 1).

>>> from gaussradau import Constant, build_radau
>>> rule = build_radau(Constant(), 1)
>>> [round(float(r), 12) for r in rule.nodes]
[-0.333333333333, 1.0]
"""

from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    IllConditionedError,
    RadauError,
    TheoryViolationError,
)
from .radau import ChiPolynomial, RadauRule, apply, build_radau, chi_eval, verify_exactness
from .weights import Constant, ExpDecay, Jacobi, ModifiedWeight, PiecewiseLinearTable, WeightSpec

__all__ = [
    "AccuracyError",
    "ChiPolynomial",
    "Constant",
    "ConvergenceError",
    "DomainError",
    "ExpDecay",
    "IllConditionedError",
    "Jacobi",
    "ModifiedWeight",
    "PiecewiseLinearTable",
    "RadauError",
    "RadauRule",
    "TheoryViolationError",
    "WeightSpec",
    "apply",
    "build_radau",
    "chi_eval",
    "verify_exactness",
]
