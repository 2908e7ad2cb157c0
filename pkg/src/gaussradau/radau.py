"""Right-sided Gauss-Radau rules: assembly, exactness checks and nodal polynomials.

The rule of order ``q`` has ``q + 1`` nodes ``-1 < r[0] < ... < r[q] = 1``
and is exact for polynomials of degree ``<= 2q`` against ``w``.  Its
interior nodes are the ``q``-point Gauss nodes for ``(1 - x) w(x)``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from numpy.polynomial import legendre as npleg

from .eigen import JacobiMatrix, eigendecompose, golub_welsch
from .errors import DomainError, RadauError, TheoryViolationError
from .orthopoly import stieltjes
from .quadcore import DEFAULT_TOL, integrate
from .weights import WeightSpec, from_dict, l1_norm

# Endpoint weights below this fraction of int w are recomputed by modified_jacobi_rule.
UNRESOLVED_ENDPOINT = 1e-8


@dataclass(frozen=True, eq=False)
class RadauRule:
    nodes: np.ndarray
    weights: np.ndarray
    weight: WeightSpec
    mu0: float

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2 or weights.shape != nodes.shape:
            raise DomainError("a rule needs q + 1 >= 2 nodes and one weight per node")
        if nodes[-1] != 1.0:
            raise DomainError("the last node of a right-sided rule must be exactly 1")
        if not nodes[0] > -1.0 or np.any(np.diff(nodes) <= 0):
            raise DomainError("nodes must be strictly increasing inside (-1, 1]")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "mu0", float(self.mu0))

    @property
    def order(self) -> int:
        return int(self.nodes.size - 1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.order,
            "weight": self.weight.to_dict(),
            "nodes": [float(v) for v in self.nodes],
            "weights": [float(v) for v in self.weights],
            "mu0": self.mu0,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["index", "node", "weight"])
        for j, (r, w) in enumerate(zip(self.nodes, self.weights)):
            out.writerow([j, repr(float(r)), repr(float(w))])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RadauRule":
        try:
            rule = cls(data["nodes"], data["weights"], from_dict(data["weight"]), data["mu0"])
        except KeyError as exc:
            raise DomainError(f"rule file is missing field {exc.args[0]!r}") from None
        except TypeError as exc:
            raise DomainError(f"malformed rule file: {exc}") from None
        if "q" in data and data["q"] != rule.order:
            raise DomainError(f"rule file declares q={data['q']} but has {rule.order + 1} nodes")
        return rule


def build_radau(
    spec: WeightSpec,
    q: int,
    tol: float = DEFAULT_TOL,
    *,
    seed: Optional[int] = None,
    check: bool = True,
) -> RadauRule:
    """Construct the right-sided Gauss-Radau rule of order ``q`` for ``spec``.

    Interior weights are ``lambda_j / (1 - r_j)`` from the Gauss rule for
    ``(1 - x) w``; the endpoint weight closes the balance against ``int w``.
    With ``check`` the result is also verified for exactness at ``100 * tol``.
    """
    if q < 1:
        raise DomainError(f"order q must be >= 1, got {q}")
    mu0 = l1_norm(spec, tol)
    gauss = golub_welsch(stieltjes(spec, q, tol, seed=seed))
    interior = gauss.weights / (1.0 - gauss.nodes)
    endpoint = mu0 - interior.sum()
    if endpoint <= UNRESOLVED_ENDPOINT * mu0:
        # The balance has cancelled to noise; the eigenvector formula keeps relative accuracy.
        endpoint = modified_jacobi_rule(spec, q, tol, seed=seed)[1][-1]
    if not endpoint > 0:
        raise TheoryViolationError(f"endpoint weight {endpoint!r} is not positive")
    if not (gauss.nodes[0] > -1.0 and gauss.nodes[-1] < 1.0):
        raise TheoryViolationError("interior Radau node outside (-1, 1)")
    weights = np.append(interior, endpoint)
    if np.any(weights <= 0) or np.any(weights > mu0):
        raise TheoryViolationError("Radau weights violate 0 < omega_j <= int w")
    rule = RadauRule(np.append(gauss.nodes, 1.0), weights, spec, mu0)
    if check:
        report = verify_exactness(rule, 100.0 * tol)
        if not report.passed:
            raise RadauError(
                f"constructed rule fails exactness: defect {report.max_defect:.3e} > {100.0 * tol:.1e}"
            )
    return rule


def modified_jacobi_rule(
    spec: WeightSpec, q: int, tol: float = DEFAULT_TOL, *, seed: Optional[int] = None
) -> tuple[np.ndarray, np.ndarray]:
    """Radau nodes and weights from the Jacobi matrix of ``w`` with its last diagonal entry replaced.

    The entry is chosen so that 1 becomes an eigenvalue (Golub's
    construction).  This route never touches ``(1 - x) w`` and serves as an
    independent check of :func:`build_radau`.
    """
    coeffs = stieltjes(spec, q + 1, tol, modified=False, seed=seed)
    a, b = coeffs.alpha, coeffs.beta
    ratio = 1.0 - a[0]
    for k in range(1, q):
        ratio = (1.0 - a[k]) - b[k] / ratio
    diag = np.append(a[:q], 1.0 - b[q] / ratio)
    nodes, first = eigendecompose(JacobiMatrix(diag, np.sqrt(b[1:]), b[0]))
    return nodes, b[0] * first**2


def apply(rule: RadauRule, f) -> float:
    """Quadrature sum ``sum_j omega_j f(r_j)``; ``f`` is called on the node array."""
    vals = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    return float(np.dot(rule.weights, vals))


@dataclass(frozen=True)
class ExactnessReport:
    defects: tuple[float, ...]
    max_defect: float
    tol: float
    passed: bool


def verify_exactness(rule: RadauRule, tol: float = 1e-10, degree: Optional[int] = None) -> ExactnessReport:
    """Compare the rule with adaptive integration on Legendre polynomials ``P_0 .. P_degree``.

    ``degree`` defaults to ``2q``.  Defects are absolute differences divided
    by ``int w``; the rule passes when the largest is at most ``tol``.
    """
    if degree is None:
        degree = 2 * rule.order
    scale = rule.mu0
    int_tol = max(1e-2 * tol, 1e-14) * scale
    exact = np.atleast_1d(integrate(lambda x: npleg.legvander(x, degree).T, rule.weight, int_tol).value)
    quad = npleg.legvander(rule.nodes, degree).T @ rule.weights
    defects = np.abs(quad - exact) / scale
    worst = float(defects.max())
    return ExactnessReport(tuple(float(d) for d in defects), worst, float(tol), worst <= tol)


class ChiPolynomial:
    """Polynomial with prescribed roots, normalized to take the value 1 at ``x = -1``.

    Kept in product form; there is deliberately no coefficient expansion.
    """

    def __init__(self, roots):
        roots = np.array(roots, dtype=float)
        if roots.ndim != 1 or np.any(roots <= -1.0):
            raise DomainError("roots must lie to the right of -1")
        roots.setflags(write=False)
        self.roots = roots
        self._scale = -1.0 - roots

    @classmethod
    def from_rule(cls, rule: RadauRule) -> "ChiPolynomial":
        return cls(rule.nodes)

    def truncated(self) -> "ChiPolynomial":
        """The same product without its last root."""
        return ChiPolynomial(self.roots[:-1])

    @property
    def degree(self) -> int:
        return int(self.roots.size)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.prod((x[..., None] - self.roots) / self._scale, axis=-1)
        return float(out) if out.ndim == 0 else out


def chi_eval(chi: ChiPolynomial, x):
    return chi(x)
