"""Adaptive Gauss-Kronrod integration against weight functions on (-1, 1).

Each panel is integrated with the 15-point Kronrod rule and its embedded
7-point Gauss rule; the difference of the two is the panel error estimate.
All panels whose estimate exceeds their share of the tolerance are bisected
together, so integrand evaluations are batched into large numpy calls.

Integrands may be vector valued: a callable returning shape ``(k, n)`` for
``n`` abscissae integrates ``k`` functions over one shared partition, with
the error of a panel taken as the maximum over components.

Weights with an algebraic endpoint singularity ``(1+x)^s``, ``s < 0``, are
integrated in the variable ``u`` with ``1 + x = u^m``, ``m = 1/(1+s)``,
which removes the singularity from the integrand.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as npoly

from .errors import AccuracyError, DomainError
from .weights import SamplePoints, WeightSpec

DEFAULT_TOL = 1e-12
DEFAULT_MAX_PANELS = 10**6
INITIAL_PANELS = 8

# Kronrod abscissae (positive half, descending) and weights; odd indices are Gauss nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:15:2] = np.concatenate([_WG, _WG[-2::-1]])

_EPS = np.finfo(float).eps


def default_max_panels() -> int:
    """Panel budget; the environment variable ``RADAU_MAX_PANELS`` overrides it."""
    raw = os.environ.get("RADAU_MAX_PANELS")
    if raw is None:
        return DEFAULT_MAX_PANELS
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"RADAU_MAX_PANELS must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError("RADAU_MAX_PANELS must be positive")
    return value


@dataclass(frozen=True)
class IntegrationResult:
    value: float | np.ndarray
    error_estimate: float
    subdivisions: int


@dataclass
class _Partition:
    """Final panels of an adaptive run, kept for building discrete measures."""

    left: np.ndarray
    right: np.ndarray


def _panel_nodes(left, right):
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    return mid[:, None] + half[:, None] * KRONROD_NODES[None, :], half


def _eval_panels(g, left, right):
    nodes, half = _panel_nodes(left, right)
    vals = np.asarray(g(nodes.ravel()), dtype=float)
    if vals.ndim == 1:
        vals = vals[None, :]
    vals = vals.reshape(vals.shape[0], left.size, 15)
    kron = (vals @ KRONROD_WEIGHTS) * half
    gauss = (vals @ GAUSS_WEIGHTS) * half
    resabs = (np.abs(vals) @ KRONROD_WEIGHTS) * half
    if not np.all(np.isfinite(kron)):
        raise AccuracyError("integrand produced non-finite values", np.nan, math.inf, left.size)
    err = np.max(np.abs(kron - gauss), axis=0)
    floor = 50.0 * _EPS * np.max(resabs, axis=0)
    return kron, err, floor


def adaptive(
    g: Callable[[np.ndarray], np.ndarray],
    breaks: Sequence[float],
    tol: float,
    max_panels: Optional[int] = None,
) -> tuple[IntegrationResult, _Partition]:
    """Integrate ``g`` over ``[breaks[0], breaks[-1]]`` starting from the given partition."""
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol!r}")
    if max_panels is None:
        max_panels = default_max_panels()
    edges = np.asarray(breaks, dtype=float)
    left, right = edges[:-1].copy(), edges[1:].copy()
    length = edges[-1] - edges[0]
    if left.size > max_panels:
        raise AccuracyError("subdivision budget smaller than the initial partition", np.nan, math.inf, 0)
    kron, err, floor = _eval_panels(g, left, right)
    while True:
        total_err = float(err.sum())
        if total_err <= tol:
            break
        width = right - left
        mid = 0.5 * (left + right)
        splittable = (err > floor) & (mid > left) & (mid < right)
        split = splittable & (err > tol * width / length)
        if not split.any():
            raise AccuracyError(
                "tolerance unattainable at floating-point resolution",
                _squeeze(kron.sum(axis=1)), total_err, left.size,
            )
        if left.size + int(split.sum()) > max_panels:
            raise AccuracyError(
                "subdivision budget exhausted", _squeeze(kron.sum(axis=1)), total_err, left.size
            )
        keep = ~split
        new_left = np.concatenate([left[split], mid[split]])
        new_right = np.concatenate([mid[split], right[split]])
        k2, e2, f2 = _eval_panels(g, new_left, new_right)
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        kron = np.concatenate([kron[:, keep], k2], axis=1)
        err = np.concatenate([err[keep], e2])
        floor = np.concatenate([floor[keep], f2])
    order = np.argsort(left)
    value = _squeeze(kron[:, order].sum(axis=1))
    return IntegrationResult(value, total_err, int(left.size)), _Partition(left[order], right[order])


def _squeeze(v):
    return float(v[0]) if v.shape[0] == 1 else v


class _Substitution:
    """Map from the working variable ``s`` in [-1, 1] to ``x`` in [-1, 1].

    For ``s < 0`` we set ``1 + x = (1 + s)^mL`` and for ``s >= 0``
    ``1 - x = (1 - s)^mR``; the exponents are 1 unless the weight has a
    negative endpoint exponent at that side.
    """

    def __init__(self, spec: WeightSpec):
        s_left, s_right = spec.endpoint_exponents
        self.m_left = 1.0 / (1.0 + s_left) if s_left < 0 else 1.0
        self.m_right = 1.0 / (1.0 + s_right) if s_right < 0 else 1.0

    def points(self, s):
        s = np.asarray(s, dtype=float)
        left = s < 0
        u = np.where(left, 1.0 + s, 1.0 - s)
        m = np.where(left, self.m_left, self.m_right)
        with np.errstate(divide="ignore"):
            log_u = np.log(u)
        log_near = m * log_u
        near = np.where(m == 1.0, u, np.exp(log_near))
        far = 2.0 - near
        with np.errstate(divide="ignore"):
            log_far = np.log(far)
        x = np.where(left, near - 1.0, 1.0 - near)
        lo = np.where(left, near, far)
        hi = np.where(left, far, near)
        log_lo = np.where(left, log_near, log_far)
        log_hi = np.where(left, log_far, log_near)
        log_jac = np.log(m) + (m - 1.0) * log_u
        return SamplePoints(x, lo, hi, log_lo, log_hi), log_jac

    def to_s(self, x: float) -> float:
        if x < 0:
            return (1.0 + x) ** (1.0 / self.m_left) - 1.0
        return 1.0 - (1.0 - x) ** (1.0 / self.m_right)


def _initial_breaks(sub: _Substitution, spec: WeightSpec, seed) -> np.ndarray:
    grid = np.linspace(-1.0, 1.0, INITIAL_PANELS + 1)
    if seed is not None:
        rng = np.random.default_rng(seed)
        spacing = grid[1] - grid[0]
        inner = grid[1:-1] + rng.uniform(-0.3, 0.3, grid.size - 2) * spacing
        grid = np.concatenate([[-1.0], inner, [1.0]])
    extra = [sub.to_s(b) for b in spec.breakpoints]
    return np.unique(np.concatenate([grid, [0.0], extra]))


def _weighted_integrand(f, spec: WeightSpec, sub: _Substitution):
    def g(s):
        pts, log_jac = sub.points(s)
        dens = np.exp(spec.log_density(pts) + log_jac)
        if f is None:
            return dens
        return np.asarray(f(pts.x), dtype=float) * dens

    return g


def integrate(
    f: Optional[Callable[[np.ndarray], np.ndarray]],
    spec: WeightSpec,
    tol: float = DEFAULT_TOL,
    *,
    max_panels: Optional[int] = None,
    seed: Optional[int] = None,
) -> IntegrationResult:
    """Compute ``int_{-1}^{1} f(x) w(x) dx`` to absolute accuracy ``tol``.

    ``f`` is vectorized over abscissae; ``None`` stands for ``f = 1``.  The
    endpoints are never sampled.  ``seed`` jitters the initial partition,
    which gives an independent discretization of the same integral.
    """
    sub = _Substitution(spec)
    result, _ = adaptive(
        _weighted_integrand(f, spec, sub), _initial_breaks(sub, spec, seed), tol, max_panels
    )
    return result


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    *,
    max_panels: Optional[int] = None,
) -> IntegrationResult:
    """Unweighted integral of a smooth ``f`` over the bounded interval ``(a, b)``."""
    if not b > a:
        raise DomainError(f"need a < b, got ({a!r}, {b!r})")
    breaks = np.linspace(a, b, INITIAL_PANELS + 1)
    result, _ = adaptive(lambda t: np.asarray(f(t), dtype=float), breaks, tol, max_panels)
    return result


def discretize(
    spec: WeightSpec,
    degree: int,
    tol: float = DEFAULT_TOL,
    *,
    max_panels: Optional[int] = None,
    seed: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Discrete measure ``(nodes, masses)`` reproducing ``w`` on polynomials up to ``degree``.

    The partition is refined until every Legendre polynomial of degree
    ``<= degree`` times ``w`` is integrated to ``tol``; the Kronrod nodes of
    the final panels, carrying mass ``kronrod weight * w * jacobian``, form
    the measure.
    """
    sub = _Substitution(spec)

    def g(s):
        pts, log_jac = sub.points(s)
        dens = np.exp(spec.log_density(pts) + log_jac)
        return npleg.legvander(pts.x, degree).T * dens

    _, part = adaptive(g, _initial_breaks(sub, spec, seed), tol, max_panels)
    s_nodes, half = _panel_nodes(part.left, part.right)
    pts, log_jac = sub.points(s_nodes.ravel())
    masses = (half[:, None] * KRONROD_WEIGHTS[None, :]).ravel()
    masses = masses * np.exp(spec.log_density(pts) + log_jac)
    return pts.x, masses


@dataclass(frozen=True)
class PolynomialCoeffs:
    """A polynomial in the monomial or Legendre basis, trimmed so the leading coefficient is nonzero."""

    coefficients: tuple[float, ...]
    basis: str = "monomial"

    def __post_init__(self):
        if self.basis not in ("monomial", "legendre"):
            raise DomainError(f"unknown polynomial basis {self.basis!r}")
        coeffs = [float(c) for c in self.coefficients] or [0.0]
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        if self.basis == "monomial":
            return npoly.polyval(x, self.coefficients)
        return npleg.legval(x, self.coefficients)


def weighted_inner_product(
    p: PolynomialCoeffs, r: PolynomialCoeffs, spec: WeightSpec, tol: float = DEFAULT_TOL
) -> float:
    return float(integrate(lambda x: p(x) * r(x), spec, tol).value)


def moments(spec: WeightSpec, count: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Monomial moments ``int x^k w(x) dx`` for ``k = 0, ..., count - 1``."""
    if count < 1:
        raise DomainError("count must be at least 1")
    res = integrate(lambda x: np.vander(x, count, increasing=True).T, spec, tol)
    return np.atleast_1d(np.asarray(res.value, dtype=float))
