"""Batch command-line front end.

Three subcommands: ``max-observers`` runs the greedy observer-counting
chains, ``compare`` emits the sequential vs non-sequential resource tables,
and ``witness-eval`` evaluates a modulated witness on one state.  Output is
JSON (default), CSV or plain text on stdout; diagnostics go to stderr.
Identical flags and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass

from . import resource, sequential, states, witness

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

_FORMATS = ("json", "csv", "text")
_TABLE1_HEADER = "family,detectability,total_rom,eta_ebits"


@dataclass(frozen=True)
class RunConfig:
    """Validated execution settings shared by the subcommands."""

    output_format: str = "json"
    seed: int = 0
    precision_digits: int = 6
    scenario: sequential.ScenarioKind | None = None
    policy: sequential.EpsilonPolicy | None = None

    def __post_init__(self):
        if self.output_format not in _FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")
        if not 2 <= self.precision_digits <= 12:
            raise ValueError("precision digits must lie in [2, 12]")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")


def _quantize(value, digits: int):
    """Round floats to ``digits`` significant figures, recursively."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {k: _quantize(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_quantize(v, digits) for v in value]
    return value


def _fmt(value: float, digits: int) -> str:
    if not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def _load_config(path: str) -> dict[str, str]:
    """Flat KEY=VALUE file; blank lines and # comments are skipped."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected KEY=VALUE")
            key, _, value = line.partition("=")
            entries[key.strip()] = value.strip()
    return entries


_CONFIG_PARSERS = {
    "format": str, "seed": int, "digits": int, "state": str,
    "alices": int, "bobs": int, "p": float, "theta": float,
    "xi": float, "lam": float, "epsilon1": float, "epsilon": float,
    "paper_rounding": lambda v: v.lower() in ("1", "true", "yes", "on"),
    "table": str,
}


def _apply_config(parser: argparse.ArgumentParser, path: str) -> dict:
    try:
        raw = _load_config(path)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    defaults = {}
    for key, value in raw.items():
        if key not in _CONFIG_PARSERS:
            parser.error(f"unknown config key {key!r}")
        try:
            defaults[key] = _CONFIG_PARSERS[key](value)
        except ValueError:
            parser.error(f"bad value for config key {key!r}: {value!r}")
    return defaults


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=_FORMATS, default="json",
                   help="output format (default json)")
    p.add_argument("--seed", type=int, default=0,
                   help="random seed for sampling paths (default 0)")
    p.add_argument("--digits", type=int, default=6,
                   help="significant digits in printed numbers (2..12, default 6)")
    p.add_argument("--config", default=None,
                   help="flat KEY=VALUE file providing flag defaults")


def _add_state_flags(p: argparse.ArgumentParser):
    p.add_argument("--state", choices=states.KINDS, default="bell",
                   help="initial state family")
    p.add_argument("--p", type=float, default=None,
                   help="mixing parameter for werner/colored, in (0, 1]")
    p.add_argument("--theta", type=float, default=None,
                   help="angle for the pure family, in (0, pi/4)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqwitness",
        description="Sequential entanglement witnessing and resource comparison")
    sub = parser.add_subparsers(dest="command", required=True)

    p_max = sub.add_parser("max-observers",
                           help="count how many observer pairs can detect entanglement")
    p_max.add_argument("--alices", type=int, default=1,
                       help="observers on the first wing (default 1)")
    p_max.add_argument("--bobs", type=int, default=20,
                       help="observers available on the second wing (default 20)")
    _add_state_flags(p_max)
    p_max.add_argument("--epsilon1", type=float, default=1e-2,
                       help="slack above the first-stage threshold (default 0.01)")
    p_max.add_argument("--epsilon", type=float, default=0.0,
                       help="slack above later-stage thresholds (default 0)")
    p_max.add_argument("--paper-rounding", dest="paper_rounding", action="store_true",
                       help="snap stage sharpness onto the 0.01 grid")
    _add_common(p_max)

    p_cmp = sub.add_parser("compare",
                           help="sequential vs non-sequential resource tables")
    p_cmp.add_argument("--table", choices=("1", "2", "both"), default="both",
                       help="which table to emit (default both)")
    p_cmp.add_argument("--paper-rounding", dest="paper_rounding", action="store_true",
                       help="also emit two-decimal cascade columns")
    _add_common(p_cmp)

    p_wit = sub.add_parser("witness-eval",
                           help="expectation of the modulated witness on a state")
    _add_state_flags(p_wit)
    p_wit.add_argument("--xi", type=float, default=1.0,
                       help="first-wing sharpness in (0, 1] (default 1)")
    p_wit.add_argument("--lambda", dest="lam", type=float, default=1.0,
                       help="second-wing sharpness in (0, 1] (default 1)")
    _add_common(p_wit)

    return parser


def _family_from_args(parser, args) -> states.StateFamily:
    try:
        if args.state == states.BELL:
            if args.p is not None or args.theta is not None:
                parser.error("bell state takes neither --p nor --theta")
            return states.StateFamily.bell()
        if args.state in (states.WERNER, states.COLORED):
            if args.p is None:
                parser.error(f"--state {args.state} requires --p")
            return states.StateFamily(args.state, args.p)
        if args.theta is None:
            parser.error("--state pure requires --theta")
        return states.StateFamily.pure(args.theta)
    except ValueError as exc:
        parser.error(str(exc))


def _run_config(parser, args, scenario=None, policy=None) -> RunConfig:
    try:
        return RunConfig(output_format=args.format, seed=args.seed,
                         precision_digits=args.digits,
                         scenario=scenario, policy=policy)
    except ValueError as exc:
        parser.error(str(exc))


def _emit(text: str):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _cmd_max_observers(parser, args) -> int:
    family = _family_from_args(parser, args)
    try:
        scenario = sequential.ScenarioKind(args.alices, args.bobs, family)
        policy = sequential.EpsilonPolicy(first_stage_slack=args.epsilon1,
                                          later_stage_slack=args.epsilon,
                                          paper_rounding=args.paper_rounding)
    except ValueError as exc:
        parser.error(str(exc))
    config = _run_config(parser, args, scenario=scenario, policy=policy)
    report = sequential.greedy_asymmetric(scenario.alices, family, policy,
                                          max_bobs=scenario.bobs)
    d = config.precision_digits
    payload = {
        "scenario": {"alices": scenario.alices, "bobs": scenario.bobs,
                     "state": family.kind, "parameter": family.param},
        "bobs_detected": report.detected_stages,
        "schedule": [[xi, lam] for xi, lam in report.schedule.stages],
        "thresholds": list(report.thresholds),
    }
    if config.output_format == "json":
        _emit(json.dumps(_quantize(payload, d)))
    elif config.output_format == "csv":
        lines = ["stage,xi,lambda,threshold,detected"]
        for i, t in enumerate(report.thresholds):
            if i < report.detected_stages:
                xi, lam = report.schedule.stages[i]
                lines.append(f"{i + 1},{_fmt(xi, d)},{_fmt(lam, d)},{_fmt(t, d)},true")
            else:
                lines.append(f"{i + 1},,,{_fmt(t, d)},false")
        _emit("\n".join(lines))
    else:
        lines = [f"bobs_detected: {report.detected_stages}"]
        for i, t in enumerate(report.thresholds):
            if i < report.detected_stages:
                xi, lam = report.schedule.stages[i]
                lines.append(f"stage {i + 1}: threshold {_fmt(t, d)} "
                             f"xi {_fmt(xi, d)} lambda {_fmt(lam, d)}")
            else:
                lines.append(f"stage {i + 1}: threshold {_fmt(t, d)} (not detectable)")
        _emit("\n".join(lines))
    return EXIT_OK


def _row_dict(row: resource.ComparisonRow) -> dict:
    data = dataclasses.asdict(row)
    if data.get("paper_rounded") is None:
        data.pop("paper_rounded", None)
    return {k: v for k, v in data.items() if v is not None or k == "family"}


def _table_payload(rows: list[resource.ComparisonRow]) -> dict:
    seq_row = next(r for r in rows if r.family == "sequential")
    body = {
        "sequential": {"detectability": seq_row.detectability,
                       "rom": seq_row.total_rom,
                       "eta_ebits": seq_row.eta_ebits},
        "non_sequential": {r.family: _row_dict(r) for r in rows
                           if r.family != "sequential"},
    }
    return body


def _cmd_compare(parser, args) -> int:
    config = _run_config(parser, args)
    tab1, tab2 = resource.build_comparison_tables(paper_rounded=args.paper_rounding)
    d = config.precision_digits
    if config.output_format == "json":
        if args.table == "1":
            payload = {"table": 1, **_table_payload(tab1)}
        elif args.table == "2":
            payload = {"table": 2, **_table_payload(tab2)}
        else:
            payload = {"table1": _table_payload(tab1), "table2": _table_payload(tab2)}
        _emit(json.dumps(_quantize(payload, d)))
        return EXIT_OK

    def csv_lines(rows):
        out = [_TABLE1_HEADER]
        for r in rows:
            out.append(f"{r.family},{_fmt(r.detectability, d)},"
                       f"{_fmt(r.total_rom, d)},{_fmt(r.eta_ebits, d)}")
        return out

    def text_lines(rows, title):
        out = [title]
        for r in rows:
            out.append(f"  {r.family}: D {_fmt(r.detectability, d)}, "
                       f"RoM {_fmt(r.total_rom, d)}, eta {_fmt(r.eta_ebits, d)} ebits")
        return out

    lines = []
    csv = config.output_format == "csv"
    if args.table in ("1", "both"):
        lines += csv_lines(tab1) if csv else text_lines(tab1, "table 1")
    if args.table in ("2", "both"):
        if csv and args.table == "both":
            lines.append("")
        lines += csv_lines(tab2) if csv else text_lines(tab2, "table 2")
    _emit("\n".join(lines))
    return EXIT_OK


def _cmd_witness_eval(parser, args) -> int:
    family = _family_from_args(parser, args)
    config = _run_config(parser, args)
    if not (0.0 < args.xi <= 1.0 and 0.0 < args.lam <= 1.0):
        parser.error("--xi and --lambda must lie in (0, 1]")
    w = witness.modulate(witness.family_witness(family.kind), args.xi, args.lam)
    value = witness.expectation(w, states.build(family))
    d = config.precision_digits
    if config.output_format == "json":
        payload = {"state": family.kind, "parameter": family.param,
                   "xi": args.xi, "lambda": args.lam, "expectation": value}
        _emit(json.dumps(_quantize(payload, d)))
    elif config.output_format == "csv":
        _emit("state,parameter,xi,lambda,expectation\n"
              f"{family.kind},{'' if family.param is None else _fmt(family.param, d)},"
              f"{_fmt(args.xi, d)},{_fmt(args.lam, d)},{_fmt(value, d)}")
    else:
        _emit(_fmt(value, d))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _apply_config(parser, args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        sub.set_defaults(**{k: v for k, v in defaults.items() if k in known})
        args = parser.parse_args(argv)
    handlers = {
        "max-observers": _cmd_max_observers,
        "compare": _cmd_compare,
        "witness-eval": _cmd_witness_eval,
    }
    try:
        return handlers[args.command](parser, args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry_point():
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
