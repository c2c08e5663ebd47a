"""Command-line front end.

Exit codes: 0 success, 1 data/validation error (or failed reproduction),
2 usage error. Angles are radians.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import optimize, reproduce as reproduce_mod, scheme_one, scheme_two, trials
from .bloch import BlochObservable
from .errors import CoherenceGameError, ValidationError
from .fock import Statistics
from .game import (
    ConditionalDistribution,
    coherence_report,
    detection_strategy,
    enumerate_deterministic_strategies,
    strategy_distribution,
)

SCHEMA_VERSION = 1
SEED_ENV = "COHERENCE_GAME_SEED"
CLI_NORM_TOL = 1e-6  # command-line decimals are rounded; renormalize within this slack


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return reproduce_mod.DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _envelope(command: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **body}


def _strategy_row(index, s) -> dict:
    rep = coherence_report(strategy_distribution(s))
    branch = "SA" if s.lambda_sa == 1.0 else "SB"
    fa, fb = s.response_sa if branch == "SA" else s.response_sb
    return {"index": index, "branch": branch, "a": list(fa), "b": list(fb), **rep.to_json_dict()}


def cmd_classical(args) -> tuple[dict, str | None]:
    if args.enumerate:
        rows = [_strategy_row(i, s) for i, s in enumerate(enumerate_deterministic_strategies())]
        body = {
            "strategies": rows,
            "count": len(rows),
            "all_p_win_half": all(abs(r["p_win"] - 0.5) <= 1e-12 for r in rows),
            "all_I_zero": all(abs(v) <= 1e-12 for r in rows for v in r["I"].values()),
        }
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "branch", "a0", "a1", "b0", "b1", "I_00", "I_01", "I_10", "I_11", "p_win"])
        for r in rows:
            w.writerow([r["index"], r["branch"], *r["a"], *r["b"], *(repr(v) for v in r["I"].values()), repr(r["p_win"])])
        return _envelope("classical", body), buf.getvalue()
    if not 0.0 <= args.lambda_sa <= 1.0:
        raise ValidationError(f"--lambda-sa must lie in [0, 1], got {args.lambda_sa}")
    dist = strategy_distribution(detection_strategy(args.lambda_sa))
    body = {"strategy": "detection", "lambda_sa": args.lambda_sa, "p_table": dist.to_json_dict()["p"]}
    body.update(coherence_report(dist).to_json_dict())
    return _envelope("classical", body), dist.to_csv()


def _observables(args):
    return (
        BlochObservable(args.theta_a, args.phi_a),
        BlochObservable(args.theta_b, args.phi_b),
    )


def cmd_scheme1(args):
    obs_a, obs_b = _observables(args)
    config = scheme_one.SchemeOneConfig(Statistics.parse(args.stats), obs_a, obs_b)
    body = scheme_one.report(config)
    body["p_win"] = body["p_win_simulated"]
    return _envelope("scheme1", body), scheme_one.measurement_distribution(config).to_csv()


def _source(args) -> scheme_two.SourceAmplitudes:
    s0, s1 = complex(args.s0.replace(" ", "")), complex(args.s1.replace(" ", ""))
    norm2 = abs(s0) ** 2 + abs(s1) ** 2
    if abs(norm2 - 1) > CLI_NORM_TOL:
        raise ValidationError(f"|s0|^2 + |s1|^2 = {norm2!r}, not 1 within {CLI_NORM_TOL}")
    scale = norm2 ** -0.5
    return scheme_two.SourceAmplitudes(s0 * scale, s1 * scale)


def cmd_scheme2(args):
    scheme_two.assert_physicality(Statistics.parse(args.stats))
    obs_a, obs_b = _observables(args)
    s = _source(args)
    body = scheme_two.report(s, obs_a, obs_b, args.stats)
    body["p_win"] = body["p_win_pipeline"]
    return _envelope("scheme2", body), scheme_two.measurement_distribution(s, obs_a, obs_b).to_csv()


def cmd_sweep(args):
    if args.scheme == "scheme1":
        res = optimize.sweep_scheme_one(args.stats, args.resolution)
        objective, axes = optimize.scheme_one_objective(args.stats), optimize.ANGLE_AXES
    else:
        scheme_two.assert_physicality(Statistics.parse(args.stats))
        res = optimize.sweep_scheme_two(args.resolution)
        objective, axes = scheme_two.closed_form_grid, optimize.SCHEME_TWO_AXES
    grid = None
    if args.grid_csv or args.format == "csv":
        grid = optimize.grid_csv(objective, axes, args.resolution)
        if args.grid_csv:
            Path(args.grid_csv).write_text(grid)
    return _envelope("sweep", optimize.sweep_report(res)), grid


PRESETS = {
    "uniform": lambda: ConditionalDistribution.uniform(),
    "classical-detection": lambda: strategy_distribution(detection_strategy()),
    "scheme1-optimal": lambda: scheme_one.measurement_distribution(
        scheme_one.SchemeOneConfig(Statistics.BOSON, BlochObservable.x(), BlochObservable.x())
    ),
    "scheme2-optimal": lambda: scheme_two.measurement_distribution(
        scheme_two.SourceAmplitudes.balanced(), BlochObservable.x(), BlochObservable.x()
    ),
}


def load_distribution(path: str) -> ConditionalDistribution:
    text = Path(path).read_text()
    try:
        if path.endswith(".csv"):
            return ConditionalDistribution.from_csv(text)
        data = json.loads(text)
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"cannot parse distribution file {path}: {exc}") from None
    if "p_table" in data:
        data = {"p": data["p_table"]}
    return ConditionalDistribution.from_json_dict(data)


def cmd_trials(args):
    dist = load_distribution(args.dist_file) if args.dist_file else PRESETS[args.preset]()
    seed = args.seed if args.seed is not None else _default_seed()
    log = trials.simulate_game(dist, args.n, seed)
    if args.log_csv:
        Path(args.log_csv).write_text(log.to_csv())
    body = trials.summary(log, args.alpha)
    body["source"] = args.dist_file or args.preset
    return _envelope("trials", body), log.to_csv()


def cmd_reproduce(args):
    seed = args.seed if args.seed is not None else _default_seed()
    report = reproduce_mod.reproduce(seed=seed, perturb=args.perturb)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["claim", "expected", "closed_form", "pipeline", "pass"])
    for c in report["checks"]:
        w.writerow([c["claim"], c["expected"], c.get("closed_form"), c.get("pipeline"), c["pass"]])
    return report, buf.getvalue()


def _add_angles(p):
    for side in ("a", "b"):
        p.add_argument(f"--theta-{side}", type=float, default=1.5707963267948966, help="polar angle (radians)")
        p.add_argument(f"--phi-{side}", type=float, default=0.0, help="azimuth (radians)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="coherence-game", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical", parents=[common], help="classical strategies")
    p.add_argument("--enumerate", action="store_true", help="all 32 deterministic strategies")
    p.add_argument("--lambda-sa", type=float, default=0.5, help="branch weight of the detection strategy")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("scheme1", parents=[common], help="source + ancilla scheme")
    p.add_argument("--stats", choices=("boson", "fermion"), default="boson")
    _add_angles(p)
    p.set_defaults(func=cmd_scheme1)

    p = sub.add_parser("scheme2", parents=[common], help="vacuum/one-particle readout scheme")
    p.add_argument("--stats", choices=("boson", "fermion"), default="boson")
    p.add_argument("--s0", default="0.7071067811865476", help="amplitude on the A path (complex literal allowed)")
    p.add_argument("--s1", default="0.7071067811865476", help="amplitude on the B path (complex literal allowed)")
    _add_angles(p)
    p.set_defaults(func=cmd_scheme2)

    p = sub.add_parser("sweep", parents=[common], help="grid search over settings")
    p.add_argument("--scheme", choices=("scheme1", "scheme2"), required=True)
    p.add_argument("--stats", choices=("boson", "fermion"), default="boson")
    p.add_argument("--resolution", type=int, default=37)
    p.add_argument("--grid-csv", help="also dump every grid point to this CSV file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trials", parents=[common], help="Monte Carlo rounds + Azuma test")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS), default="scheme1-optimal")
    src.add_argument("--dist-file", help="distribution as JSON {'p': 4x4} or CSV x,y,a,b,p")
    p.add_argument("-n", "--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or {reproduce_mod.DEFAULT_SEED}")
    p.add_argument("--alpha", type=float, default=trials.DEFAULT_ALPHA)
    p.add_argument("--log-csv", help="write the round-by-round log here")
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("reproduce", parents=[common], help="regenerate every headline number")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        report, csv_text = args.func(args)
    except (CoherenceGameError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "csv":
        if csv_text is None:
            print("error: no CSV form for this report", file=sys.stderr)
            return 1
        text = csv_text
    else:
        text = json.dumps(report, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    if args.command == "reproduce" and not report["all_pass"]:
        print("error: reproduction mismatch", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
