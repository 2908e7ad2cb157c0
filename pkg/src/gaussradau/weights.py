"""Weight functions on the open interval (-1, 1).

Every weight is an immutable, picklable value object.  Weights are evaluated
through :meth:`WeightSpec.log_density`, which receives the sample abscissae
together with the distances to both endpoints.  Passing the distances
separately keeps Jacobi-type endpoint singularities accurate even when the
integration engine samples points that round to +-1 in ``x`` itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .errors import DomainError

DEFAULT_RHO = 1.0


class SamplePoints(NamedTuple):
    """Abscissae with their endpoint distances ``1 + x`` and ``1 - x``."""

    x: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    log_lo: np.ndarray
    log_hi: np.ndarray

    @classmethod
    def from_x(cls, x) -> "SamplePoints":
        x = np.asarray(x, dtype=float)
        lo = 1.0 + x
        hi = 1.0 - x
        with np.errstate(divide="ignore"):
            return cls(x, lo, hi, np.log(lo), np.log(hi))


class WeightSpec:
    """Base class of the weight families.

    Subclasses implement :meth:`log_density` and :meth:`to_dict`.  The
    remaining hooks describe structure the integrator exploits: algebraic
    endpoint exponents and interior points where the weight is not smooth.
    """

    family: str = ""

    def log_density(self, pts: SamplePoints) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError

    @property
    def endpoint_exponents(self) -> tuple[float, float]:
        """Exponents ``(s_left, s_right)`` with ``w ~ (1+x)^s_left`` at -1, ``(1-x)^s_right`` at 1."""
        return (0.0, 0.0)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def __call__(self, x):
        pts = SamplePoints.from_x(x)
        return np.exp(self.log_density(pts))


@dataclass(frozen=True)
class Constant(WeightSpec):
    """The weight ``w(x) = 1``."""

    family = "constant"

    def log_density(self, pts):
        return np.zeros_like(pts.x)

    def to_dict(self):
        return {"family": "constant"}


@dataclass(frozen=True)
class ExpDecay(WeightSpec):
    """The weight ``w(x) = exp(-rho * tau * (x + 1))``.

    ``tau`` may be any real number, so growing weights are admissible.
    """

    rho: float = DEFAULT_RHO
    tau: float = 0.0
    family = "exp"

    def __post_init__(self):
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "tau", float(self.tau))
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise DomainError(f"rho must be a positive finite number, got {self.rho!r}")
        if not math.isfinite(self.tau):
            raise DomainError(f"tau must be finite, got {self.tau!r}")

    def log_density(self, pts):
        return -self.rho * self.tau * pts.lo

    def to_dict(self):
        return {"family": "exp", "rho": self.rho, "tau": self.tau}


@dataclass(frozen=True)
class Jacobi(WeightSpec):
    """The weight ``w(x) = (1 - x)^alpha (1 + x)^beta`` with ``alpha, beta > -1``."""

    alpha: float = 0.0
    beta: float = 0.0
    family = "jacobi"

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        for name, value in (("alpha", self.alpha), ("beta", self.beta)):
            if not (math.isfinite(value) and value > -1.0):
                raise DomainError(f"Jacobi exponent {name} must be > -1, got {value!r}")

    def log_density(self, pts):
        out = np.zeros_like(pts.x)
        if self.alpha != 0.0:
            out = out + self.alpha * pts.log_hi
        if self.beta != 0.0:
            out = out + self.beta * pts.log_lo
        return out

    @property
    def endpoint_exponents(self):
        return (self.beta, self.alpha)

    def to_dict(self):
        return {"family": "jacobi", "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class PiecewiseLinearTable(WeightSpec):
    """Piecewise-linear interpolation of positive values at knots spanning [-1, 1]."""

    xs: tuple[float, ...] = field(default=(-1.0, 1.0))
    vals: tuple[float, ...] = field(default=(1.0, 1.0))
    family = "table"

    def __post_init__(self):
        xs = tuple(float(v) for v in self.xs)
        vals = tuple(float(v) for v in self.vals)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "vals", vals)
        if len(xs) < 2 or len(xs) != len(vals):
            raise DomainError("table needs at least two knots and one value per knot")
        if xs[0] != -1.0 or xs[-1] != 1.0:
            raise DomainError("table knots must start at -1 and end at 1")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("table knots must be strictly increasing")
        if not all(math.isfinite(v) and v > 0 for v in vals):
            raise DomainError("table values must be positive and finite")

    def log_density(self, pts):
        return np.log(np.interp(pts.x, self.xs, self.vals))

    @property
    def breakpoints(self):
        return self.xs[1:-1]

    def exact_integral(self) -> float:
        """Trapezoidal sum, which is exact for a piecewise-linear function."""
        return float(np.trapezoid(self.vals, self.xs))

    def to_dict(self):
        return {"family": "table", "xs": list(self.xs), "vals": list(self.vals)}


@dataclass(frozen=True)
class ModifiedWeight(WeightSpec):
    """The weight ``(1 - x) * base(x)``."""

    base: WeightSpec = field(default_factory=Constant)
    family = "modified"

    def log_density(self, pts):
        return pts.log_hi + self.base.log_density(pts)

    @property
    def endpoint_exponents(self):
        left, right = self.base.endpoint_exponents
        return (left, right + 1.0)

    @property
    def breakpoints(self):
        return self.base.breakpoints

    def to_dict(self):
        return {"family": "modified", "base": self.base.to_dict()}


@dataclass(frozen=True)
class _AbsDifference(WeightSpec):
    """``|a(x) - b(x)|``; only ever integrated, never used as a rule weight."""

    a: WeightSpec
    b: WeightSpec

    def log_density(self, pts):
        la = self.a.log_density(pts)
        lb = self.b.log_density(pts)
        top = np.maximum(la, lb)
        gap = -np.abs(la - lb)
        with np.errstate(divide="ignore"):
            return top + np.log(-np.expm1(gap))

    @property
    def endpoint_exponents(self):
        (al, ar), (bl, br) = self.a.endpoint_exponents, self.b.endpoint_exponents
        return (min(al, bl), min(ar, br))

    @property
    def breakpoints(self):
        return tuple(sorted(set(self.a.breakpoints) | set(self.b.breakpoints)))


def from_dict(data: dict[str, Any]) -> WeightSpec:
    """Parse the JSON weight-spec format, e.g. ``{"family": "exp", "rho": 1, "tau": 2}``."""
    if not isinstance(data, dict) or "family" not in data:
        raise DomainError("weight spec must be an object with a 'family' field")
    family = data["family"]
    try:
        if family == "constant":
            return Constant()
        if family == "exp":
            return ExpDecay(rho=data.get("rho", DEFAULT_RHO), tau=data["tau"])
        if family == "jacobi":
            return Jacobi(alpha=data["alpha"], beta=data["beta"])
        if family == "table":
            return PiecewiseLinearTable(xs=tuple(data["xs"]), vals=tuple(data["vals"]))
        if family == "modified":
            return ModifiedWeight(from_dict(data["base"]))
    except KeyError as exc:
        raise DomainError(f"weight family {family!r} is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed {family!r} weight spec: {exc}") from None
    raise DomainError(f"unknown weight family {family!r}")


def evaluate(spec: WeightSpec, x):
    """Evaluate ``spec`` at points strictly inside (-1, 1)."""
    arr = np.asarray(x, dtype=float)
    if not np.all((arr > -1.0) & (arr < 1.0)):
        raise DomainError("weights are only evaluated on the open interval (-1, 1)")
    out = spec(arr)
    return float(out) if out.ndim == 0 else out


def l1_norm(spec: WeightSpec, tol: float = 1e-12) -> float:
    from .quadcore import integrate

    return float(integrate(None, spec, tol).value)


def l1_distance(a: WeightSpec, b: WeightSpec, tol: float = 1e-12) -> float:
    """L1 distance on (-1, 1), computed to absolute accuracy ``tol``."""
    from .quadcore import integrate

    if a == b:
        return 0.0
    return float(integrate(None, _AbsDifference(a, b), tol).value)
