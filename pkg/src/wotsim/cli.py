"""Command-line surface: analyze protocols, sweep the tradeoff curve and the
robustness grid, run honest simulations, and run the verification suites.

Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage or
input error, 3 protocol fails structural validation or completeness.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import verification
from .attacks import cheat_report
from .catalog import (
    WCFPrimitive,
    build_cks,
    build_trivial,
    dyadic_round,
    simulate_combined,
)
from .errors import (
    CompletenessError,
    LayoutError,
    NotPSDError,
    RangeError,
    ShapeError,
    SpecError,
)
from .oracle import cks_alice_oracle
from .protocol import spec_from_dict
from .qcore import TOL_SPECTRAL
from .tradeoff import curve, tune_lambda

BUILTIN_PROTOCOLS = {"cks": build_cks, "trivial": build_trivial}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    out: str | None = None
    fmt: str = "json"


def _num(x: float) -> str:
    """12 significant digits, locale-independent."""
    return f"{x:.12g}"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_num(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _resolve_protocol(name_or_path: str):
    if name_or_path in BUILTIN_PROTOCOLS:
        return BUILTIN_PROTOCOLS[name_or_path]()
    try:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValueError(f"unknown protocol and unreadable path: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed protocol JSON: {exc}") from exc
    return spec_from_dict(data)


def cmd_analyze(args) -> int:
    cfg = RunConfig(args.seed, args.out, args.format)
    spec = _resolve_protocol(args.protocol)
    report = cheat_report(spec)
    payload = dataclasses.asdict(report)
    if cfg.fmt == "csv":
        keys = sorted(payload)
        text = _csv_text(keys, [[payload[k] for k in keys]])
    else:
        text = _json_text(payload)
    _emit(text, cfg)
    return 0 if report.theorem1_lhs >= 2.0 - TOL_SPECTRAL else 1


def cmd_curve(args) -> int:
    cfg = RunConfig(args.seed, args.out, args.format)
    points = curve(args.epsilon, args.points, args.dyadic_bits)
    header = ["lambda", "epsilon", "p_bob", "p_alice", "combined"]
    rows = [[p.lam, p.epsilon, p.b_bound, p.a_bound, p.combined] for p in points]
    if cfg.fmt == "json":
        text = _json_text([dict(zip(header, row)) for row in rows])
    else:
        text = _csv_text(header, rows)
    _emit(text, cfg)
    return 0


def cmd_robustness(args) -> int:
    cfg = RunConfig(args.seed, args.out, args.format)
    if not 0.0 <= args.delta_min <= args.delta_max <= 0.5:
        raise RangeError(
            f"need 0 <= delta-min <= delta-max <= 1/2, got [{args.delta_min}, {args.delta_max}]"
        )
    if args.steps < 1:
        raise RangeError(f"steps must be >= 1, got {args.steps}")
    deltas = np.linspace(args.delta_min, args.delta_max, args.steps)
    header = ["delta", "p3", "lambda_star", "max_cheat"]
    if args.oracle_grid:
        header.append("oracle_p3")
    rows = []
    for d in deltas:
        pt = tune_lambda(float(d), 0.0)
        row = [pt.delta, pt.p3, pt.lambda_star, pt.max_cheat]
        if args.oracle_grid:
            row.append(cks_alice_oracle(float(d), args.oracle_grid))
        rows.append(row)
    if cfg.fmt == "json":
        text = _json_text([dict(zip(header, row)) for row in rows])
    else:
        text = _csv_text(header, rows)
    _emit(text, cfg)
    return 0


def cmd_simulate(args) -> int:
    cfg = RunConfig(args.seed, args.out, args.format)
    lam = dyadic_round(args.lam, args.dyadic_bits)
    wcf = WCFPrimitive(lam, 0.0, args.dyadic_bits)
    stats = simulate_combined(wcf, args.trials, args.seed)
    _emit(_json_text(dataclasses.asdict(stats)), cfg)
    return 0


def cmd_verify(args) -> int:
    cfg = RunConfig(args.seed, args.out, "text")
    lines, all_ok = verification.run_all(args.seed)
    _emit("\n".join(lines) + "\n", cfg)
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wotsim",
        description="Cheating-probability analysis for quantum weak oblivious transfer",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, default_fmt):
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default=default_fmt)

    p = sub.add_parser("analyze", help="cheating report for a protocol")
    p.add_argument("protocol", help="builtin name (cks, trivial) or JSON file path")
    common(p, "json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("curve", help="tradeoff curve over the mixing weight")
    p.add_argument("--epsilon", type=float, default=0.0, help="coin-flip bias")
    p.add_argument("--points", type=int, default=33, help="grid points (>= 2)")
    p.add_argument("--dyadic-bits", type=int, default=20)
    common(p, "csv")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("robustness", help="sweep the certainty relaxation")
    p.add_argument("--delta-min", type=float, default=0.0)
    p.add_argument("--delta-max", type=float, default=0.05)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--oracle-grid", type=int, default=0,
                   help="add a grid-search cross-check column with this resolution")
    common(p, "csv")
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("simulate", help="honest Monte Carlo of the combined protocol")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="probability of the trivial branch (dyadically rounded)")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--dyadic-bits", type=int, default=20)
    common(p, "json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the seeded self-check suites")
    common(p, "json")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, CompletenessError, LayoutError, ShapeError, NotPSDError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
