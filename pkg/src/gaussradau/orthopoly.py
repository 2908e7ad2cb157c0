"""Recurrence coefficients of orthonormal polynomials by the discretized Stieltjes procedure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, IllConditionedError
from .quadcore import DEFAULT_TOL, discretize
from .weights import ModifiedWeight, WeightSpec

MAX_ORDER = 32


@dataclass(frozen=True, eq=False)
class RecurrenceCoefficients:
    """Coefficients of ``sqrt(b[k+1]) p[k+1] = (x - a[k]) p[k] - sqrt(b[k]) p[k-1]``.

    ``beta[0]`` is the total mass of the measure, so ``p[0] = 1/sqrt(beta[0])``.
    """

    alpha: np.ndarray
    beta: np.ndarray
    measure: Optional[WeightSpec] = None

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta, dtype=float)
        if alpha.ndim != 1 or alpha.shape != beta.shape or alpha.size < 1:
            raise DomainError("alpha and beta must be nonempty sequences of equal length")
        for k, b in enumerate(beta):
            if not b > 0:
                raise IllConditionedError(k, float(b))
        alpha.setflags(write=False)
        beta.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def order(self) -> int:
        return int(self.alpha.size)


def stieltjes(
    spec: WeightSpec,
    q: int,
    tol: float = DEFAULT_TOL,
    *,
    modified: bool = True,
    seed: Optional[int] = None,
    max_panels: Optional[int] = None,
) -> RecurrenceCoefficients:
    """First ``q`` recurrence coefficient pairs for ``(1 - x) w(x)``, or for ``w`` itself.

    The measure is replaced by an adaptive discretization that integrates
    all polynomials of degree ``<= 2q`` to ``tol``; the Stieltjes procedure
    then runs on that discrete measure, carrying the orthonormal
    polynomials as value vectors on its nodes.
    """
    if q < 1:
        raise DomainError(f"order q must be >= 1, got {q}")
    measure = ModifiedWeight(spec) if modified else spec
    x, mass = discretize(measure, 2 * q, tol, seed=seed, max_panels=max_panels)

    alpha = np.empty(q)
    beta = np.empty(q)
    beta[0] = mass.sum()
    if not beta[0] > 0:
        raise IllConditionedError(0, float(beta[0]))
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(beta[0]))
    for k in range(q):
        sq = p * p * mass
        alpha[k] = np.dot(sq, x) / sq.sum()
        if k == q - 1:
            break
        v = (x - alpha[k]) * p
        if k > 0:
            v -= math.sqrt(beta[k]) * p_prev
        beta[k + 1] = np.dot(v * v, mass)
        if not (beta[k + 1] > 0 and math.isfinite(beta[k + 1])):
            raise IllConditionedError(k + 1, float(beta[k + 1]))
        p_prev, p = p, v / math.sqrt(beta[k + 1])
    return RecurrenceCoefficients(alpha, beta, measure)


def eval_orthonormal(coeffs: RecurrenceCoefficients, k: int, x):
    """Orthonormal polynomial of degree ``k`` at ``x`` by forward recurrence."""
    if not 0 <= k < coeffs.order:
        raise DomainError(f"index {k} out of range for order {coeffs.order}")
    x = np.asarray(x, dtype=float)
    a, b = coeffs.alpha, coeffs.beta
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(b[0]))
    for j in range(k):
        nxt = (x - a[j]) * p
        if j > 0:
            nxt -= math.sqrt(b[j]) * p_prev
        p_prev, p = p, nxt / math.sqrt(b[j + 1])
    return float(p) if p.ndim == 0 else p
