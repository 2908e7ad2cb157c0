"""Command-line interface: ``radau build``, ``radau verify`` and ``radau experiment``.

Exit codes: 0 success or PASS, 1 verification or experiment FAIL, 2 usage
or input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .errors import DomainError, RadauError
from .quadcore import DEFAULT_TOL
from .radau import RadauRule, build_radau, verify_exactness
from .weights import DEFAULT_RHO, from_dict

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _order(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"order must be an integer, got {text!r}") from None
    if q < 1:
        raise argparse.ArgumentTypeError(f"order must satisfy q >= 1, got {q}")
    return q


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"value must be positive, got {v}")
    return v


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_weight_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("weight")
    g.add_argument("--weight", choices=["constant", "exp", "jacobi", "table"], help="weight family")
    g.add_argument("--weight-file", type=Path, help="JSON weight spec, e.g. {\"family\": \"exp\", \"tau\": 2}")
    g.add_argument("--rho", type=_positive, default=DEFAULT_RHO)
    g.add_argument("--tau", type=float, default=0.0)
    g.add_argument("--alpha", type=float, default=0.0)
    g.add_argument("--beta", type=float, default=0.0)
    g.add_argument("--xs", type=_floats, help="table knots, comma separated")
    g.add_argument("--vals", type=_floats, help="table values, comma separated")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", type=Path, help="write here instead of standard output")


def _weight_from_args(args):
    if args.weight_file is not None:
        try:
            data = json.loads(args.weight_file.read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read weight file {args.weight_file}: {exc}") from None
        return from_dict(data)
    family = args.weight or "constant"
    data = {"family": family}
    if family == "exp":
        data.update(rho=args.rho, tau=args.tau)
    elif family == "jacobi":
        data.update(alpha=args.alpha, beta=args.beta)
    elif family == "table":
        if args.xs is None or args.vals is None:
            raise UsageError("--weight table needs --xs and --vals")
        data.update(xs=args.xs, vals=args.vals)
    return from_dict(data)


def _emit(args, obj) -> None:
    text = obj.to_csv() if args.format == "csv" else obj.to_json()
    if args.output is not None:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    spec = _weight_from_args(args)
    rule = build_radau(spec, args.q, args.tol, seed=args.seed)
    _emit(args, rule)
    return EXIT_OK


class _VerifyOutput:
    def __init__(self, report, q):
        self.report, self.q = report, q

    def to_json(self):
        r = self.report
        payload = {
            "q": self.q,
            "tol": r.tol,
            "max_defect": r.max_defect,
            "defects": list(r.defects),
            "verdict": "PASS" if r.passed else "FAIL",
        }
        return json.dumps(payload, indent=2) + "\n"

    def to_csv(self):
        rows = ["degree,defect"] + [f"{k},{d!r}" for k, d in enumerate(self.report.defects)]
        return "\n".join(rows) + "\n"


def cmd_verify(args) -> int:
    if args.rule is not None:
        try:
            data = json.loads(args.rule.read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read rule file {args.rule}: {exc}") from None
        rule = RadauRule.from_dict(data)
    else:
        if args.q is None:
            raise UsageError("verify needs --rule FILE or --q with weight options")
        rule = build_radau(_weight_from_args(args), args.q, DEFAULT_TOL, check=False)
    report = verify_exactness(rule, args.tol)
    _emit(args, _VerifyOutput(report, rule.order))
    verdict = "PASS" if report.passed else "FAIL"
    print(f"max defect {report.max_defect:.3e} (tol {report.tol:.1e}): {verdict}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def _continuity_target(args):
    if args.target == "constant":
        return from_dict({"family": "constant"})
    try:
        return from_dict(json.loads(Path(args.target).read_text()))
    except (OSError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(f"--target must be 'constant' or a weight-spec file: {exc}") from None


def cmd_continuity(args) -> int:
    target = _continuity_target(args)
    if target.to_dict() != {"family": "constant"}:
        raise UsageError("perturbation families are defined around the constant target only")
    if args.family == "exp":
        perturbations = analysis.exp_perturbations(args.steps, args.rho)
    else:
        perturbations = analysis.table_perturbations(args.steps)
    report = analysis.continuity_experiment(
        target, perturbations, args.q, args.tol, args.threshold, workers=args.workers
    )
    _emit(args, report)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_chi_bound(args) -> int:
    if args.tau_max < args.tau_min:
        raise UsageError("--tau-max must not be below --tau-min")
    if args.tau_min < 0 and not args.allow_negative_tau:
        raise UsageError("negative tau requires --allow-negative-tau")
    grid = np.linspace(args.tau_min, args.tau_max, args.grid).tolist()
    report = analysis.chi_bound_chain(
        args.rho, grid, args.q, args.tol, allow_negative=args.allow_negative_tau, workers=args.workers
    )
    _emit(args, report)
    return EXIT_OK if report.passed else EXIT_FAIL


class _SweepOutput:
    def __init__(self, checks):
        self.checks = checks

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_json(self):
        payload = {
            "experiment": "interval",
            "checks": [c.to_dict() for c in self.checks],
            "max_defect": max(c.defect for c in self.checks),
            "verdict": "PASS" if self.passed else "FAIL",
        }
        return json.dumps(payload, indent=2) + "\n"

    def to_csv(self):
        lines = [c.to_csv().splitlines() for c in self.checks]
        return "\n".join([lines[0][0]] + [ln[1] for ln in lines]) + "\n"


def cmd_interval(args) -> int:
    if args.random is not None:
        intervals = analysis.random_intervals(args.random, args.max_length, args.seed)
    else:
        if args.a is None or args.b is None:
            raise UsageError("interval needs --a and --b, or --random N")
        intervals = [analysis.Interval(args.a, args.b)]
    checks = analysis.interval_scaling_sweep(intervals, args.rho, args.q, args.tol, workers=args.workers)
    out = checks[0] if len(checks) == 1 else _SweepOutput(checks)
    _emit(args, out)
    return EXIT_OK if out.passed else EXIT_FAIL


def cmd_constant_c(args) -> int:
    report = analysis.estimate_node_constant(
        args.rho, args.T, args.q, args.grid, spot_checks=args.spot_checks, seed=args.seed, workers=args.workers
    )
    _emit(args, report)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radau", description="Right-sided weighted Gauss-Radau quadrature.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a rule")
    _add_weight_args(p)
    p.add_argument("--q", type=_order, required=True)
    p.add_argument("--tol", type=_positive, default=DEFAULT_TOL, help="absolute integration tolerance")
    p.add_argument("--seed", type=int, help="jitter the initial discretization")
    _add_output_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="check exactness of a rule on degrees 0..2q")
    p.add_argument("--rule", type=Path, help="rule JSON written by 'radau build'")
    _add_weight_args(p)
    p.add_argument("--q", type=_order)
    p.add_argument("--tol", type=_positive, default=100 * DEFAULT_TOL, help="maximum relative defect")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="run an analysis experiment")
    exp = p.add_subparsers(dest="experiment", required=True)

    def common(e):
        e.add_argument("--q", type=_order, required=True)
        e.add_argument("--rho", type=_positive, default=DEFAULT_RHO)
        e.add_argument("--workers", type=int, default=None)
        _add_output_args(e)

    e = exp.add_parser("continuity", help="rule deviations along an L1-convergent weight sequence")
    common(e)
    e.add_argument("--target", default="constant", help="'constant' or a weight-spec file")
    e.add_argument("--family", choices=["exp", "table"], default="exp")
    e.add_argument("--steps", type=_order, default=7)
    e.add_argument("--threshold", type=_positive, default=0.1)
    e.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
    e.set_defaults(func=cmd_continuity)

    e = exp.add_parser("chi-bound", help="the A <= B = C chain on a tau grid")
    common(e)
    e.add_argument("--tau-min", type=float, default=0.0)
    e.add_argument("--tau-max", type=float, default=2.0)
    e.add_argument("--grid", type=_order, default=21)
    e.add_argument("--tol", type=_positive, default=analysis.DEFAULT_CHECK_TOL)
    e.add_argument("--allow-negative-tau", action="store_true")
    e.set_defaults(func=cmd_chi_bound)

    e = exp.add_parser("interval", help="change of variables onto an interval")
    common(e)
    e.add_argument("--a", type=float)
    e.add_argument("--b", type=float)
    e.add_argument("--random", type=_order, help="check this many random intervals instead")
    e.add_argument("--max-length", type=_positive, default=4.0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--tol", type=_positive, default=analysis.DEFAULT_CHECK_TOL)
    e.set_defaults(func=cmd_interval)

    e = exp.add_parser("constant-c", help="uniform lower bound on the lowest node")
    common(e)
    e.add_argument("--T", type=float, required=True)
    e.add_argument("--grid", type=int, default=64)
    e.add_argument("--spot-checks", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_constant_c)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"radau: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RadauError as exc:
        print(f"radau: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
