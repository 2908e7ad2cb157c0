"""Symmetric tridiagonal eigenproblem and Golub-Welsch Gauss rules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, TheoryViolationError
from .orthopoly import RecurrenceCoefficients

MAX_SWEEPS = 50
MIN_SEPARATION = 1e-14


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    diagonal: np.ndarray
    offdiagonal: np.ndarray
    mu0: float

    def __post_init__(self):
        d = np.array(self.diagonal, dtype=float)
        e = np.array(self.offdiagonal, dtype=float)
        if d.ndim != 1 or d.size < 1 or e.shape != (d.size - 1,):
            raise DomainError("off-diagonal must have exactly one entry fewer than the diagonal")
        if np.any(e <= 0):
            raise DomainError("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "offdiagonal", e)
        object.__setattr__(self, "mu0", float(self.mu0))

    @classmethod
    def from_recurrence(cls, coeffs: RecurrenceCoefficients) -> "JacobiMatrix":
        return cls(coeffs.alpha, np.sqrt(coeffs.beta[1:]), coeffs.beta[0])

    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)


@dataclass(frozen=True, eq=False)
class GaussRule:
    nodes: np.ndarray
    weights: np.ndarray

    def apply(self, f) -> float:
        return float(np.dot(self.weights, np.broadcast_to(f(self.nodes), self.nodes.shape)))


def _implicit_ql(d: np.ndarray, e: np.ndarray, z: np.ndarray) -> None:
    """In-place implicit QL with Wilkinson shifts.

    ``d`` holds the diagonal, ``e[i]`` couples rows ``i`` and ``i+1``
    (``e[-1]`` is workspace).  Every plane rotation is applied to the columns
    of ``z``: start from the identity for full eigenvectors, or from the row
    ``e_1`` to track only first components.
    """
    n = d.size
    eps = np.finfo(float).eps
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > MAX_SWEEPS:
                raise ConvergenceError(f"eigenvalue {l} not converged after {MAX_SWEEPS} sweeps")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def eigendecompose(m: JacobiMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and the first components of the unit eigenvectors."""
    d = m.diagonal.copy()
    e = np.append(m.offdiagonal, 0.0)
    z = np.zeros((1, d.size))
    z[0, 0] = 1.0
    _implicit_ql(d, e, z)
    order = np.argsort(d)
    return d[order], z[0, order]


def golub_welsch(coeffs: RecurrenceCoefficients) -> GaussRule:
    """Gauss rule of ``coeffs.order`` points for the measure behind ``coeffs``."""
    m = JacobiMatrix.from_recurrence(coeffs)
    nodes, first = eigendecompose(m)
    if nodes.size > 1 and np.min(np.diff(nodes)) <= MIN_SEPARATION:
        raise TheoryViolationError("Gauss nodes are not separated; the spectrum must be simple")
    weights = m.mu0 * first**2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GaussRule(nodes, weights)
