"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 degenerate
calibration or classification.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import formats
from .calibration import calibrate, validate_profile
from .classifier import classify_stream
from .commands import console_sink, default_table, emit_all, monitoring_sink
from .dsp import freq_response, uniform_grid
from .dsp.response import write_response_csv
from .errors import (
    DegenerateCalibrationError,
    EogError,
    FormatError,
    IncompleteCalibrationError,
)
from .evaluate import DEFAULT_TOLERANCE, evaluate
from .pipeline import RUN_KEYS, FilterChoice, default_scenario, filter_session, sweep_for
from .synth import synth_session

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DEGENERATE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_scenario(arg: str) -> tuple[dict, "formats.ScenarioSpec"]:
    if arg == "default":
        spec = default_scenario()
        data = formats.scenario_to_dict(spec)
    else:
        data = formats.read_scenario_dict(arg)
    spec = formats.scenario_from_dict(data, extra_keys=RUN_KEYS)
    return data, spec


def _filter_choice(args) -> FilterChoice:
    if getattr(args, "design", None):
        try:
            return FilterChoice.parse_design(args.design)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return FilterChoice(paper=True)


# -- subcommands ------------------------------------------------------------


def cmd_scenario(args) -> int:
    spec = default_scenario(args.count, args.seed)
    formats.write_scenario(spec, args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    data, spec = _load_scenario(args.scenario)
    if args.sweep:
        spec = sweep_for(spec, data.get("calibration"))
    formats.write_session(synth_session(spec), args.out)
    return EXIT_OK


def cmd_filter(args) -> int:
    session = formats.read_session(args.inp)
    cascade = _filter_choice(args).build(session.fs)
    formats.write_session(filter_session(session, cascade), args.out)
    return EXIT_OK


def cmd_freqz(args) -> int:
    cascade = _filter_choice(args).build(args.fs)
    resp = freq_response(cascade, uniform_grid(args.points))
    if args.out == "-":
        write_response_csv(resp, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_response_csv(resp, fh)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    session = formats.read_session(args.inp)
    profile = calibrate(session, k=args.k)
    formats.write_profile(profile, args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    session = formats.read_session(args.inp)
    profile = formats.read_profile(args.profile)
    problems = validate_profile(profile)
    if problems:
        raise DegenerateCalibrationError("invalid profile: " + "; ".join(problems))
    table = formats.read_table(args.table) if args.table else default_table()
    events = classify_stream(session, profile)
    formats.write_events(events, args.events)
    with open(args.commands, "w", encoding="utf-8", newline="") as mon:
        sinks = [monitoring_sink(mon)]
        if not args.quiet:
            sinks.append(console_sink(sys.stdout))
        emit_all(events, table, sinks)
    return EXIT_OK


def cmd_eval(args) -> int:
    if not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")
    events = formats.read_events(args.events)
    truth = formats.labels_from_session_csv(args.truth)
    cm = evaluate(events, truth, args.tolerance)
    text = json.dumps(cm.to_dict(), indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_run(args) -> int:
    started = time.perf_counter()
    data, spec = _load_scenario(args.scenario)
    out = formats.ensure_dir(args.out_dir)
    scenario_path = out / "scenario.json"
    scenario_path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    choice = FilterChoice(paper=True) if args.paper_filter else FilterChoice.from_config(data.get("filter", {}))
    filter_args = ["--paper"] if choice.paper else ["--design", choice.as_design_arg()]
    k = float(data.get("calibration", {}).get("k", 0.6))

    p = {name: str(out / name) for name in (
        "session.csv", "filtered.csv", "sweep.csv", "sweep_filtered.csv", "profile.json",
        "table.json", "events.ndjson", "commands.ndjson", "eval.json",
    )}
    formats.write_table(default_table(), p["table.json"])
    steps = [
        ["synth", "--scenario", str(scenario_path), "--out", p["session.csv"]],
        ["synth", "--scenario", str(scenario_path), "--sweep", "--out", p["sweep.csv"]],
        ["filter", "--in", p["session.csv"], "--out", p["filtered.csv"], *filter_args],
        ["filter", "--in", p["sweep.csv"], "--out", p["sweep_filtered.csv"], *filter_args],
        ["calibrate", "--in", p["sweep_filtered.csv"], "--out", p["profile.json"], "--k", repr(k)],
        ["classify", "--in", p["filtered.csv"], "--profile", p["profile.json"], "--table", p["table.json"],
         "--events", p["events.ndjson"], "--commands", p["commands.ndjson"], *(["--quiet"] if args.quiet else [])],
        ["eval", "--events", p["events.ndjson"], "--truth", p["session.csv"], "--out", p["eval.json"]],
    ]
    for argv in steps:
        code = _dispatch(argv)
        if code != EXIT_OK:
            return code
    print(f"run finished in {time.perf_counter() - started:.2f} s; artifacts in {out}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eogpipe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("scenario", help="write the default randomized scenario file")
    s.add_argument("--out", required=True)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=2024)
    s.set_defaults(func=cmd_scenario)

    s = sub.add_parser("synth", help="render a scenario into a labeled session CSV")
    s.add_argument("--scenario", required=True, help="scenario JSON path, or 'default'")
    s.add_argument("--out", required=True)
    s.add_argument("--sweep", action="store_true", help="emit the matching calibration sweep instead")
    s.set_defaults(func=cmd_synth)

    def add_filter_opts(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--paper", action="store_true", help="fixed four-section reference cascade (default)")
        g.add_argument("--design", metavar="ORDER,F_LO,F_HI", help="Butterworth band-pass design")

    s = sub.add_parser("filter", help="filter both channels of a session CSV")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    add_filter_opts(s)
    s.set_defaults(func=cmd_filter)

    s = sub.add_parser("freqz", help="export the cascade frequency response")
    add_filter_opts(s)
    s.add_argument("--fs", type=float, default=250.0, help="sample rate for --design (Hz)")
    s.add_argument("--points", type=int, default=512)
    s.add_argument("--out", required=True, help="CSV path or '-' for stdout")
    s.set_defaults(func=cmd_freqz)

    s = sub.add_parser("calibrate", help="build a profile from a filtered calibration sweep")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--k", type=float, default=0.6)
    s.set_defaults(func=cmd_calibrate)

    s = sub.add_parser("classify", help="detect events and emit commands")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--profile", required=True)
    s.add_argument("--table")
    s.add_argument("--events", required=True)
    s.add_argument("--commands", required=True)
    s.add_argument("--quiet", action="store_true", help="no console rendering")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("eval", help="score events against labeled truth")
    s.add_argument("--events", required=True)
    s.add_argument("--truth", required=True)
    s.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    s.add_argument("--out")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("run", help="synth -> filter -> calibrate -> classify -> eval")
    s.add_argument("--scenario", required=True, help="scenario JSON path, or 'default'")
    s.add_argument("--paper-filter", action="store_true")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_run)
    return parser


def _dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateCalibrationError, IncompleteCalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (EogError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main(argv=None) -> int:
    return _dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
