"""Command-line entry point.

Exit codes: 0 when the run halted (or the command succeeded), 2 when a run
ended in a cycle or exhausted its budget, 1 on usage, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, StipulateError
from .experiments import (
    SYMBOLIC_INTERVALS,
    classify,
    file_problem,
    fraction_text,
    grid,
    run_experiment,
    sweep,
)
from .machine import DEFAULT_BUDGET, INF
from .parsing import ExperimentConfig, load_config, load_machine, split_list
from .problems import BUILDERS, get_problem

EXIT_HALTED, EXIT_ERROR, EXIT_NOT_HALTED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _experiment_args(p: argparse.ArgumentParser, *, intervals: str) -> None:
    p.add_argument("--config", help="key: value experiment file")
    p.add_argument("--problem", choices=sorted(BUILDERS), help="shipped example problem")
    p.add_argument("--machine-file", help="machine description file (decision machine)")
    p.add_argument("--input", action="append", default=[], help="input text; repeat for several")
    p.add_argument("--stream", action="append", default=[], help="further stream entries after the input")
    if intervals == "single":
        p.add_argument("--interval", help="variation interval: ticks, inf, or a form in N such as N+1")
    else:
        p.add_argument("--interval-list", help="comma-separated intervals, e.g. inf,4N,N+1,N,1")
    p.add_argument("--budget", type=int, help=f"step budget (default {DEFAULT_BUDGET})")
    p.add_argument("--region-start", type=int, help="first cell of the input region")
    p.add_argument("--seed", type=int, help="recorded in report headers")
    p.add_argument("--out", help="write the CSV report here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stipulate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="bare run plus one stipulated run")
    _experiment_args(run, intervals="single")
    run.add_argument("--c", help="constant c in the transform (default N)")

    sw = sub.add_parser("sweep", help="one stipulated run per interval")
    _experiment_args(sw, intervals="list")

    gr = sub.add_parser("grid", help="outcome for every input and interval")
    _experiment_args(gr, intervals="list")

    cl = sub.add_parser("classify", help="transform arithmetic only")
    cl.add_argument("N", type=int, help="bare step count")
    cl.add_argument("T", help="variation interval (ticks, rational, or inf)")
    cl.add_argument("--c", help="constant c (default N)")

    pc = sub.add_parser("parse-check", help="validate a machine file")
    pc.add_argument("machine_file")
    return parser


def _merge(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    if args.problem:
        cfg.problem = args.problem
    if args.machine_file:
        cfg.machine_file = args.machine_file
    if args.input:
        cfg.inputs = list(args.input)
    cfg.inputs += list(args.stream)
    if getattr(args, "interval", None):
        cfg.intervals = [args.interval]
    if getattr(args, "interval_list", None) is not None:
        cfg.intervals = split_list(args.interval_list)
        if not cfg.intervals:
            raise ConfigError("empty interval list")
    for key in ("budget", "region_start", "seed", "out", "c"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    cfg.validate()
    if not cfg.inputs:
        raise ConfigError("no input given (use --input or an input field in the config)")
    return cfg


def _target(cfg: ExperimentConfig):
    if cfg.machine_file:
        return file_problem(load_machine(cfg.machine_file))
    return get_problem(cfg.problem)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args) -> int:
    cfg = _merge(args)
    problem = _target(cfg)
    stream = [problem.parse(s) for s in cfg.inputs]
    if len(cfg.intervals) > 1:
        raise ConfigError("run takes one interval; use sweep for several")
    interval = cfg.intervals[0] if cfg.intervals else "inf"
    report = run_experiment(
        problem, stream, interval, budget=cfg.budget, region_start=cfg.region_start,
        c=_rational(cfg.c) if cfg.c else None,
    )
    print("\n".join(report.lines(cfg.region_start)))
    if cfg.out:
        Path(cfg.out).write_text(report.csv_text())
    return EXIT_HALTED if report.record.outcome.halted else EXIT_NOT_HALTED


def _cmd_sweep(args) -> int:
    cfg = _merge(args)
    problem = _target(cfg)
    stream = [problem.parse(s) for s in cfg.inputs]
    tokens = cfg.intervals or list(SYMBOLIC_INTERVALS)
    report = sweep(
        problem, stream, tokens, budget=cfg.budget, region_start=cfg.region_start, seed=cfg.seed
    )
    _emit(report.csv_text(), cfg.out)
    return EXIT_HALTED


def _cmd_grid(args) -> int:
    cfg = _merge(args)
    problem = _target(cfg)
    inputs = [problem.parse(s) for s in cfg.inputs]
    tokens = cfg.intervals or ["inf", "N+1", "1"]
    report = grid(
        problem, inputs, tokens, budget=cfg.budget, region_start=cfg.region_start, seed=cfg.seed
    )
    _emit(report.csv_text(), cfg.out)
    return EXIT_HALTED


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {text!r}") from None


def _cmd_classify(args) -> int:
    T = args.T.strip()
    T = INF if T.lower() == "inf" else _rational(T)
    s = classify(args.N, T, _rational(args.c) if args.c else None)
    print(f"N: {s.N}")
    print(f"T: {args.T}")
    print(f"c: {fraction_text(s.c)}")
    print(f"f(P): {fraction_text(s.fP)}")
    print(f"f(P,T): {s.f_text}")
    print(f"f_n: {fraction_text(s.fn)}  ({s.region})")
    print(f"case: {s.case_text}")
    return EXIT_HALTED


def _cmd_parse_check(args) -> int:
    spec = load_machine(args.machine_file)
    halting = 2
    print(
        f"ok: {args.machine_file}: {len(spec.states)} states ({len(spec.states) - halting} non-halting), "
        f"{len(spec.tape_alphabet)} tape symbols, {len(spec.transitions)} transitions"
    )
    return EXIT_HALTED


COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "grid": _cmd_grid,
    "classify": _cmd_classify,
    "parse-check": _cmd_parse_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (StipulateError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
