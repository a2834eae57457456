"""Command-line interface: ``analyze``, ``scores``, ``simulate``, ``power``, ``efficiency``.

Exit codes: 0 success, 2 validation error, 3 degenerate analysis, 4 I/O error.
Errors are reported on stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .exceptions import DegenerateError, ValidationError
from .harness import Method, StudyConfig, parse_methods, relative_efficiency, rows_to_csv, run_power_study
from .landmark import landmark_test
from .logrank import make_weights, weighted_logrank
from .modest import modest_scores, modest_test
from .scores import weights_to_scores
from .simulate import TrialDesign, get_scenario, replication_rng, simulate_trial
from .survival import build_risk_table, read_csv, write_csv

EXIT_OK, EXIT_VALIDATION, EXIT_DEGENERATE, EXIT_IO = 0, 2, 3, 4


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return json.dumps(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        return format(value, ".17g")
    return json.dumps(value)


def dumps(obj: dict) -> str:
    """Flat JSON object with floats at 17 significant digits."""
    return "{" + ", ".join(f"{json.dumps(k)}: {_fmt(v)}" for k, v in obj.items()) + "}"


def _method(args) -> Method:
    text = args.method
    if ":" in text:
        methods = parse_methods(text)
        if len(methods) != 1:
            raise ValidationError("give a single method, not a grid")
        return methods[0]
    if text == "lrt":
        return Method("lrt")
    return Method(text, args.tstar)


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def cmd_analyze(args):
    data = read_csv(args.input)
    method = _method(args)
    if method.family == "landmark":
        res = landmark_test(data, method.t_star)
    else:
        table = build_risk_table(data)
        if method.family == "lrt":
            res = weighted_logrank(table, make_weights(table, "standard"))
        elif method.family == "wlrt":
            res = weighted_logrank(table, make_weights(table, "threshold", method.t_star), t_star=method.t_star)
        else:
            res = modest_test(table, method.t_star, args.variance)
    out = {
        "method": method.family,
        "t_star": method.t_star,
        "U": res.statistic,
        "V": res.variance,
        "z": res.z,
        "p_one_sided": res.p_one_sided,
        "alpha": args.alpha,
        "reject": bool(res.rejects(args.alpha)),
    }
    if args.two_sided:
        out["chi2"] = res.chi2
        out["p_two_sided"] = res.p_two_sided
    _emit(dumps(out) + "\n", args.out)


def cmd_scores(args):
    table = build_risk_table(read_csv(args.input))
    method = _method(args)
    if method.family == "lrt":
        scheme = make_weights(table, "standard")
        scores = weights_to_scores(table, scheme)
    elif method.family == "wlrt":
        scheme = make_weights(table, "threshold", method.t_star)
        scores = weights_to_scores(table, scheme)
    elif method.family == "mwlrt":
        scheme, scores = modest_scores(table, method.t_star)
    else:
        raise ValidationError("scores are defined for lrt, wlrt and mwlrt only")
    lines = ["t,c,C,w"]
    for t, c, C, w in zip(table.event_times, scores.c, scores.C[1:], scheme.weights):
        lines.append(f"{t:.17g},{c:.17g},{C:.17g},{w:.17g}")
    _emit("\n".join(lines) + "\n", args.out)


def cmd_simulate(args):
    spec = get_scenario(args.scenario)
    design = TrialDesign(args.n_per_arm, args.accrual, args.cutoff)
    data = simulate_trial(spec, design, replication_rng(args.seed, spec.id, args.replication))
    _emit(write_csv(data), args.out)


def cmd_power(args):
    config = StudyConfig(
        scenarios=tuple(s.strip() for s in args.scenarios.split(",")),
        methods=tuple(parse_methods(args.methods)),
        n_reps=args.reps,
        alpha_one_sided=args.alpha,
        master_seed=args.seed,
        design=TrialDesign(args.n_per_arm, args.accrual, args.cutoff),
        variance=args.variance,
    )
    for sid in config.scenarios:
        get_scenario(sid)
    rows = run_power_study(config, workers=args.workers)
    _emit(rows_to_csv(rows), args.out)


def cmd_efficiency(args):
    re_ = relative_efficiency(args.power_a, args.power_b, args.alpha)
    _emit(dumps({"power_a": args.power_a, "power_b": args.power_b, "alpha": args.alpha, "relative_efficiency": re_}) + "\n", None)


def _alpha(text):
    value = float(text)
    if not 0 < value < 0.5:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 0.5)")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wlogrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def method_args(p):
        p.add_argument("--method", default="lrt", help="lrt | wlrt | mwlrt | landmark, or family:t*")
        p.add_argument("--tstar", type=float, default=None)

    p = sub.add_parser("analyze", help="test a time,event,arm CSV")
    p.add_argument("--input", required=True)
    method_args(p)
    p.add_argument("--alpha", type=_alpha, default=0.025, help="one-sided level")
    p.add_argument("--variance", choices=("plugin", "permutation"), default="plugin")
    p.add_argument("--two-sided", action="store_true", help="also report chi2 and two-sided p")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scores", help="write t,c,C,w for a weight scheme")
    p.add_argument("--input", required=True)
    method_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scores)

    def design_args(p):
        p.add_argument("--n-per-arm", type=int, default=100)
        p.add_argument("--accrual", type=float, default=12.0)
        p.add_argument("--cutoff", type=float, default=36.0)
        p.add_argument("--seed", type=_seed, required=True)

    p = sub.add_parser("simulate", help="simulate one trial data set")
    p.add_argument("--scenario", required=True, choices=("I", "II", "III", "IV"))
    design_args(p)
    p.add_argument("--replication", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("power", help="Monte Carlo rejection rates")
    p.add_argument("--scenarios", default="I,II,III,IV")
    p.add_argument("--methods", default="lrt,wlrt:6,mwlrt:3:30:3,landmark:15:30:3")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--alpha", type=_alpha, default=0.025)
    p.add_argument("--variance", choices=("plugin", "permutation"), default="plugin")
    p.add_argument("--workers", type=int, default=1)
    design_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("efficiency", help="relative efficiency of two powers")
    p.add_argument("--power-a", type=float, required=True)
    p.add_argument("--power-b", type=float, required=True)
    p.add_argument("--alpha", type=_alpha, default=0.025)
    p.set_defaults(func=cmd_efficiency)
    return parser


def _fail(code: int, kind: str, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except DegenerateError as exc:
        return _fail(EXIT_DEGENERATE, "degenerate", exc)
    except (ValidationError, ValueError) as exc:
        return _fail(EXIT_VALIDATION, "validation", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
