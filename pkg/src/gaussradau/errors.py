"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class RadauError(Exception):
    """Base class for all errors raised by :mod:`gaussradau`."""


class DomainError(RadauError, ValueError):
    """An argument lies outside the domain of an operation."""


class AccuracyError(RadauError):
    """Adaptive integration could not reach the requested tolerance.

    The best available estimate and its error bound are kept so callers can
    decide whether the result is still usable.
    """

    def __init__(self, message: str, estimate, error: float, panels: int):
        super().__init__(f"{message} (estimate={estimate!r}, error={error:.3e}, panels={panels})")
        self.estimate = estimate
        self.error = error
        self.panels = panels


class IllConditionedError(RadauError):
    """The Stieltjes procedure lost positive definiteness."""

    def __init__(self, index: int, value: float):
        super().__init__(f"non-positive recurrence coefficient beta[{index}] = {value!r}")
        self.index = index
        self.value = value


class ConvergenceError(RadauError):
    """An iterative eigenvalue solver hit its iteration cap."""


class TheoryViolationError(RadauError):
    """A computed quantity contradicts a guaranteed structural property.

    Raised for non-positive endpoint weights, nodes outside ``(-1, 1]``,
    coinciding nodes, or a non-positive node separation constant.
    """
