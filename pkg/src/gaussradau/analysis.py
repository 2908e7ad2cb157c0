"""Numerical experiments on Gauss-Radau rules for exponential weights.

The experiments cover four facts about the rules:

* nodes and weights depend continuously on the weight in the L1 metric
  (:func:`continuity_experiment`);
* for ``w_tau(x) = exp(-rho tau (x + 1))`` the chain
  ``int chi^2 w <= int chi_trunc^2 w = omega_q prod((1 - r_j)/(1 + r_j))^2``
  holds, where ``chi_trunc`` drops the root at 1 (:func:`chi_bound_chain`);
* transporting to an interval ``I`` by the affine map turns the weight
  ``exp(-2 rho (t - inf I))`` into ``w_{|I|}`` (:func:`interval_scaling_check`);
* the lowest node stays uniformly away from -1 for ``tau`` in a compact
  range (:func:`estimate_node_constant`).

Per-grid-point work is independent; pass ``workers > 1`` to fan it out
over processes.  Results always come back in grid order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, RadauError, TheoryViolationError
from .quadcore import DEFAULT_TOL, integrate, integrate_interval
from .radau import ChiPolynomial, RadauRule, build_radau
from .weights import DEFAULT_RHO, ExpDecay, PiecewiseLinearTable, WeightSpec, l1_distance

SAFETY_FACTOR = 0.99
DEFAULT_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.b > self.a):
            raise DomainError(f"an interval needs finite a < b, got ({self.a!r}, {self.b!r})")

    @property
    def length(self) -> float:
        return self.b - self.a

    def phi(self, x):
        return 0.5 * (self.a + self.b) + 0.5 * (self.b - self.a) * np.asarray(x, dtype=float)

    def phi_inv(self, t):
        return (2.0 * np.asarray(t, dtype=float) - self.a - self.b) / (self.b - self.a)


def phi(i: Interval, x):
    """Affine image of ``x`` in [-1, 1] under the map onto ``i``."""
    arr = np.asarray(x, dtype=float)
    if np.any((arr < -1.0) | (arr > 1.0)):
        raise DomainError("phi is defined on [-1, 1]")
    out = i.phi(arr)
    return float(out) if out.ndim == 0 else out


def phi_inv(i: Interval, t):
    arr = np.asarray(t, dtype=float)
    if np.any((arr < i.a) | (arr > i.b)):
        raise DomainError(f"phi_inv is defined on [{i.a}, {i.b}]")
    out = i.phi_inv(arr)
    return float(out) if out.ndim == 0 else out


def _map(fn, items, workers):
    items = list(items)
    if not workers or workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _dump(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    for row in rows:
        out.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# --- continuity ------------------------------------------------------------


@dataclass(frozen=True)
class ContinuityStep:
    index: int
    l1_distance: float
    max_node_deviation: float
    max_weight_deviation: float


@dataclass(frozen=True)
class ContinuityReport:
    q: int
    target: dict
    threshold: float
    steps: tuple[ContinuityStep, ...]
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        return {
            "experiment": "continuity",
            "q": self.q,
            "target": self.target,
            "threshold": self.threshold,
            "steps": [asdict(s) for s in self.steps],
            "verdict": self.verdict,
        }

    def to_json(self):
        return _dump(self.to_dict())

    def to_csv(self):
        return _csv(
            ["index", "l1_distance", "max_node_deviation", "max_weight_deviation"],
            [(s.index, s.l1_distance, s.max_node_deviation, s.max_weight_deviation) for s in self.steps],
        )


def _deviation(target: RadauRule, spec: WeightSpec, q: int, tol: float, index: int):
    try:
        rule = build_radau(spec, q, tol)
        dist = l1_distance(target.weight, spec, tol)
    except RadauError as exc:
        raise RadauError(f"perturbation {index} ({spec!r}) failed: {exc}") from exc
    return ContinuityStep(
        index,
        dist,
        float(np.max(np.abs(rule.nodes - target.nodes))),
        float(np.max(np.abs(rule.weights - target.weights))),
    )


def continuity_experiment(
    target: WeightSpec,
    perturbations: Sequence[WeightSpec],
    q: int,
    tol: float = DEFAULT_TOL,
    threshold: float = 0.1,
    *,
    workers: Optional[int] = None,
) -> ContinuityReport:
    """Deviation of the rules for ``perturbations`` from the rule for ``target``.

    The perturbations must approach ``target`` in L1, i.e. their distances
    must not increase.  The verdict passes when both final deviations are at
    most ``threshold`` and no earlier step deviates less than the last one.
    """
    if not perturbations:
        raise DomainError("need at least one perturbation")
    base = build_radau(target, q, tol)
    jobs = [partial(_deviation, base, spec, q, tol, n) for n, spec in enumerate(perturbations)]
    steps = _map(_call, jobs, workers)
    dists = [s.l1_distance for s in steps]
    if any(b > a + tol for a, b in zip(dists, dists[1:])):
        raise DomainError(f"perturbation distances must be non-increasing, got {dists}")
    nodes = [s.max_node_deviation for s in steps]
    wts = [s.max_weight_deviation for s in steps]
    finite = all(math.isfinite(v) for v in nodes + wts)
    passed = (
        finite
        and nodes[-1] <= threshold
        and wts[-1] <= threshold
        and nodes[-1] == min(nodes)
        and wts[-1] == min(wts)
    )
    return ContinuityReport(q, target.to_dict(), float(threshold), tuple(steps), passed)


def _call(job):
    return job()


def exp_perturbations(steps: int, rho: float = DEFAULT_RHO) -> list[WeightSpec]:
    """``ExpDecay(rho, 2^-n)`` for ``n = 0 .. steps-1``; these tend to the constant weight."""
    return [ExpDecay(rho, 2.0**-n) for n in range(steps)]


def table_perturbations(steps: int) -> list[WeightSpec]:
    """Tables with values ``(1, 1 + 2^-n, 1)`` at knots ``(-1, 0, 1)``."""
    return [PiecewiseLinearTable((-1.0, 0.0, 1.0), (1.0, 1.0 + 2.0**-n, 1.0)) for n in range(steps)]


# --- chi bound chain -----------------------------------------------------------


@dataclass(frozen=True)
class ChiBoundPoint:
    tau: float
    r0: float
    omega_q: float
    A: float
    B: float
    C: float
    passed: bool


@dataclass(frozen=True)
class ChiBoundReport:
    rho: float
    q: int
    tol: float
    points: tuple[ChiBoundPoint, ...]
    sup_A: float
    witness: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.witness is None

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        return {
            "experiment": "chi-bound",
            "rho": self.rho,
            "q": self.q,
            "tol": self.tol,
            "points": [asdict(p) for p in self.points],
            "sup_A": self.sup_A,
            "witness_tau": self.witness,
            "verdict": self.verdict,
        }

    def to_json(self):
        return _dump(self.to_dict())

    def to_csv(self):
        return _csv(
            ["tau", "r0", "omega_q", "A", "B", "C"],
            [(p.tau, p.r0, p.omega_q, p.A, p.B, p.C) for p in self.points],
        )


def chain_bound(rule: RadauRule) -> float:
    """``omega_q * prod_{j<q} ((1 - r_j) / (1 + r_j))^2`` from the rule alone."""
    inner = rule.nodes[:-1]
    return float(rule.weights[-1] * np.prod(((1.0 - inner) / (1.0 + inner)) ** 2))


def _chi_point(rho: float, q: int, tol: float, int_tol: float, tau: float) -> ChiBoundPoint:
    spec = ExpDecay(rho, tau)
    rule = build_radau(spec, q, int_tol)
    chi = ChiPolynomial.from_rule(rule)
    trunc = chi.truncated()
    c = chain_bound(rule)
    scale = max(1.0, c)
    a = integrate(lambda x: chi(x) ** 2, spec, 1e-3 * tol * scale).value
    b = integrate(lambda x: trunc(x) ** 2, spec, 1e-3 * tol * scale).value
    ok = a <= b + tol and abs(b - c) <= tol * scale and b >= 0 and c >= 0
    return ChiBoundPoint(float(tau), float(rule.nodes[0]), float(rule.weights[-1]), a, b, c, ok)


def chi_bound_chain(
    rho: float,
    tau_grid: Sequence[float],
    q: int,
    tol: float = DEFAULT_CHECK_TOL,
    *,
    int_tol: float = DEFAULT_TOL,
    allow_negative: bool = False,
    workers: Optional[int] = None,
) -> ChiBoundReport:
    """Evaluate ``A <= B = C`` on a grid of ``tau`` values.

    ``A = int chi^2 w`` and ``B = int chi_trunc^2 w`` come from adaptive
    integration, ``C`` from the rule.  A point passes when ``A <= B + tol``
    and ``|B - C| <= tol * max(1, C)``.  Negative ``tau`` needs ``allow_negative``.
    """
    taus = [float(t) for t in tau_grid]
    if not taus:
        raise DomainError("tau grid must be nonempty")
    if not all(math.isfinite(t) for t in taus):
        raise DomainError("tau grid must be finite")
    if not allow_negative and min(taus) < 0:
        raise DomainError("negative tau values require allow_negative=True")
    points = _map(partial(_chi_point, float(rho), q, tol, int_tol), taus, workers)
    witness = next((p.tau for p in points if not p.passed), None)
    return ChiBoundReport(float(rho), q, float(tol), tuple(points), max(p.A for p in points), witness)


# --- interval scaling ----------------------------------------------------------


@dataclass(frozen=True)
class IntervalCheck:
    a: float
    b: float
    rho: float
    q: int
    lhs: float
    rhs: float
    defect: float
    passed: bool

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        return {"experiment": "interval", **asdict(self), "verdict": self.verdict}

    def to_json(self):
        return _dump(self.to_dict())

    def to_csv(self):
        return _csv(
            ["a", "b", "rho", "q", "lhs", "rhs", "defect"],
            [(self.a, self.b, self.rho, self.q, self.lhs, self.rhs, self.defect)],
        )


def interval_scaling_check(
    i: Interval, rho: float, q: int, tol: float = DEFAULT_CHECK_TOL, *, int_tol: float = DEFAULT_TOL
) -> IntervalCheck:
    """Compare the scaled integral over ``i`` with its pull-back to (-1, 1).

    ``lhs = (1/|I|) int_I chi(phi_inv(t))^2 exp(-2 rho (t - a)) dt`` and
    ``rhs = (1/2) int chi^2 w_{|I|}``, where ``chi`` is built from the rule
    for ``w_{|I|}``.  Passes when ``|lhs - rhs| <= tol * max(1, rhs)``.
    """
    spec = ExpDecay(rho, i.length)
    rule = build_radau(spec, q, int_tol)
    chi = ChiPolynomial.from_rule(rule)
    atol = 1e-3 * tol * max(1.0, 0.5 * chain_bound(rule))
    rhs = 0.5 * integrate(lambda x: chi(x) ** 2, spec, atol).value

    def scaled(t):
        return chi(i.phi_inv(t)) ** 2 * np.exp(-2.0 * rho * (t - i.a))

    lhs = integrate_interval(scaled, i.a, i.b, atol * i.length).value / i.length
    defect = abs(lhs - rhs)
    return IntervalCheck(i.a, i.b, float(rho), q, lhs, rhs, defect, defect <= tol * max(1.0, rhs))


def random_intervals(count: int, max_length: float, seed: int = 0, spread: float = 10.0) -> list[Interval]:
    """Intervals with left end uniform in ``[-spread, spread]`` and length uniform in ``(0, max_length]``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a = rng.uniform(-spread, spread)
        out.append(Interval(a, a + max_length * (1.0 - rng.random())))
    return out


def _interval_job(args):
    i, rho, q, tol, int_tol = args
    return interval_scaling_check(i, rho, q, tol, int_tol=int_tol)


def interval_scaling_sweep(
    intervals: Sequence[Interval],
    rho: float,
    q: int,
    tol: float = DEFAULT_CHECK_TOL,
    *,
    int_tol: float = DEFAULT_TOL,
    workers: Optional[int] = None,
) -> list[IntervalCheck]:
    return _map(_interval_job, [(i, rho, q, tol, int_tol) for i in intervals], workers)


# --- lowest node constant ------------------------------------------------------


@dataclass(frozen=True)
class NodeConstantReport:
    rho: float
    T: float
    q: int
    taus: tuple[float, ...]
    lowest_nodes: tuple[float, ...]
    min_offset: float
    c: float
    spot_checks: int
    spot_failures: int = 0
    failures: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return self.c > 0 and self.spot_failures == 0

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        return {
            "experiment": "constant-c",
            "rho": self.rho,
            "T": self.T,
            "q": self.q,
            "grid": [{"tau": t, "r0": r} for t, r in zip(self.taus, self.lowest_nodes)],
            "min_offset": self.min_offset,
            "c": self.c,
            "spot_checks": self.spot_checks,
            "spot_failures": self.spot_failures,
            "verdict": self.verdict,
        }

    def to_json(self):
        return _dump(self.to_dict())

    def to_csv(self):
        return _csv(["tau", "r0"], zip(self.taus, self.lowest_nodes))


def _lowest_node(rho: float, q: int, tol: float, tau: float) -> float:
    return float(build_radau(ExpDecay(rho, tau), q, tol).nodes[0])


def estimate_node_constant(
    rho: float,
    T: float,
    q: int,
    grid_size: int,
    tol: float = DEFAULT_TOL,
    *,
    spot_checks: int = 100,
    seed: int = 0,
    workers: Optional[int] = None,
) -> NodeConstantReport:
    """Uniform constant ``c`` with ``phi_I(r_0) - inf I >= c |I|`` for ``tau`` on a grid over [0, T].

    Since ``phi_I(r_0) - inf I = |I| (r_0 + 1) / 2``, the sharp constant is
    the grid minimum of ``(r_0 + 1) / 2``; it is returned scaled by
    :data:`SAFETY_FACTOR`.  ``T = 0`` collapses the grid to ``tau = 0``.
    The claim is then spot-checked on random intervals with ``|I| <= T``.
    """
    if not (math.isfinite(T) and T >= 0):
        raise DomainError(f"horizon T must be a nonnegative number, got {T!r}")
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    taus = [0.0] if T == 0 else [float(t) for t in np.linspace(0.0, T, grid_size)]
    r0 = _map(partial(_lowest_node, float(rho), q, tol), taus, workers)
    min_offset = min(r + 1.0 for r in r0)
    c = SAFETY_FACTOR * 0.5 * min_offset
    if not c > 0:
        raise TheoryViolationError(f"node separation constant {c!r} is not positive")

    failures = []
    checks = 0
    if T > 0:
        rng = np.random.default_rng(seed)
        for _ in range(spot_checks):
            k = int(rng.integers(len(taus)))
            a = rng.uniform(-10.0, 10.0)
            i = Interval(a, a + T * (1.0 - rng.random()))
            checks += 1
            gap = phi(i, r0[k]) - i.a
            if not gap >= c * i.length:
                failures.append((taus[k], i.a, i.b, gap))
    return NodeConstantReport(
        float(rho), float(T), q, tuple(taus), tuple(r0), min_offset, c, checks, len(failures), tuple(failures)
    )


__all__ = [
    "ContinuityReport",
    "ChiBoundReport",
    "Interval",
    "IntervalCheck",
    "NodeConstantReport",
    "chain_bound",
    "chi_bound_chain",
    "continuity_experiment",
    "estimate_node_constant",
    "exp_perturbations",
    "interval_scaling_check",
    "interval_scaling_sweep",
    "phi",
    "phi_inv",
    "random_intervals",
    "table_perturbations",
]
