"""Readers and writers for every on-disk format the pipeline uses.

Session CSV
    Header ``t,h,v`` or ``t,h,v,label``; values at 9 significant digits.
    A label cell reads ``Kind:duration`` on the row where the movement
    starts and is empty elsewhere. The sample rate is implied by the time
    column.
Profile / command table / scenario
    JSON objects; unknown fields are rejected.
Events and commands
    NDJSON, one object per line.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .calibration import CalibrationProfile
from .commands import CommandEntry, CommandTable, command_to_ndjson
from .errors import FormatError
from .model import Command, GroundTruthLabel, MovementEvent, MovementKind, SessionRecording
from .synth import ScenarioSpec, WaveformTiming

K = MovementKind


def fmt9(x: float) -> str:
    return f"{x:.9g}"


def _open(target, mode):
    if hasattr(target, "write") or hasattr(target, "read"):
        return _NoClose(target)
    return open(target, mode, encoding="utf-8", newline="")


class _NoClose:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        return False


# -- sessions ---------------------------------------------------------------


def write_session(session: SessionRecording, target) -> None:
    label_at = {}
    if session.labels:
        for lab in session.labels:
            idx = int(np.argmin(np.abs(session.t - lab.onset)))
            label_at[idx] = f"{lab.kind.value}:{fmt9(lab.duration)}"
    with _open(target, "w") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if session.labels:
            w.writerow(["t", "h", "v", "label"])
            for i, (t, h, v) in enumerate(zip(session.t.tolist(), session.h.tolist(), session.v.tolist())):
                w.writerow([fmt9(t), fmt9(h), fmt9(v), label_at.get(i, "")])
        else:
            w.writerow(["t", "h", "v"])
            for t, h, v in zip(session.t.tolist(), session.h.tolist(), session.v.tolist()):
                w.writerow([fmt9(t), fmt9(h), fmt9(v)])


def _print_quantum(t: float) -> float:
    """Half a unit in the last place of ``t`` printed at 9 significant digits."""
    if t == 0:
        return 0.0
    return 0.5 * 10.0 ** (math.floor(math.log10(abs(t))) - 8)


def read_session(source, gap_tol: float = 1e-6) -> SessionRecording:
    with _open(source, "r") as fh:
        rows = csv.reader(fh)
        try:
            header = next(rows)
        except StopIteration:
            raise FormatError("empty file", 1) from None
        header = [c.strip() for c in header]
        if header not in (["t", "h", "v"], ["t", "h", "v", "label"]):
            raise FormatError(f"header must be t,h,v or t,h,v,label, got {','.join(header)}", 1)
        ncol = len(header)
        t, h, v, pending = [], [], [], []
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != ncol:
                raise FormatError(f"expected {ncol} fields, got {len(row)}", lineno)
            try:
                ti, hi, vi = float(row[0]), float(row[1]), float(row[2])
            except ValueError as exc:
                raise FormatError(str(exc), lineno) from None
            if t and not ti > t[-1]:
                raise FormatError(f"non-monotone time {row[0]}", lineno)
            if ncol == 4 and row[3].strip():
                pending.append((lineno, ti, row[3].strip()))
            t.append(ti)
            h.append(hi)
            v.append(vi)

    if len(t) < 2:
        raise FormatError("need at least two samples to infer the sample rate")
    fs = float(fmt9(1.0 / (t[1] - t[0])))
    grid = t[0] + np.arange(len(t)) / fs
    for i, (ti, gi) in enumerate(zip(t, grid.tolist())):
        if abs(ti - gi) > max(gap_tol, _print_quantum(ti)):
            raise FormatError(f"sample time {ti} off the {fs} Hz grid", i + 2)

    labels = []
    for lineno, onset, cell in pending:
        kind_s, sep, dur_s = cell.partition(":")
        try:
            if not sep:
                raise ValueError(f"label {cell!r} is not kind:duration")
            kind = K.parse(kind_s)
            dur = float(dur_s)
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        if kind is K.NEUTRAL or not dur > 0:
            raise FormatError(f"invalid label {cell!r}", lineno)
        labels.append(GroundTruthLabel(kind, onset, dur))
    return SessionRecording(fs, t, h, v, labels)


def labels_from_session_csv(source) -> list[GroundTruthLabel]:
    return list(read_session(source).labels)


# -- JSON objects -----------------------------------------------------------


def _load_object(source, what: str) -> dict:
    try:
        with _open(source, "r") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: invalid JSON ({exc.msg})", exc.lineno) from None
    if not isinstance(data, dict):
        raise FormatError(f"{what}: expected a JSON object")
    return data


def _dump_object(data: dict, target) -> None:
    with _open(target, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def _number(data: dict, key: str, what: str) -> float:
    val = data[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise FormatError(f"{what}: field {key!r} must be a number")
    return float(val)


def write_profile(profile: CalibrationProfile, target) -> None:
    _dump_object(profile.to_dict(), target)


def read_profile(source) -> CalibrationProfile:
    data = _load_object(source, "profile")
    names = CalibrationProfile.field_names()
    unknown = sorted(set(data) - set(names))
    if unknown:
        raise FormatError(f"profile: unknown field {unknown[0]!r}")
    for name in names:
        if name not in data:
            raise FormatError(f"profile: missing field {name!r}")
    return CalibrationProfile(**{name: _number(data, name, "profile") for name in names})


def table_to_dict(table: CommandTable) -> dict:
    return {k.value: {"text": e.text, "track": e.track, "color": e.color} for k, e in table.items()}


def write_table(table: CommandTable, target) -> None:
    _dump_object(table_to_dict(table), target)


def read_table(source) -> CommandTable:
    data = _load_object(source, "command table")
    entries = {}
    for key, val in data.items():
        try:
            kind = K.parse(key)
        except ValueError:
            raise FormatError(f"command table: unknown kind {key!r}") from None
        if not isinstance(val, dict) or set(val) != {"text", "track", "color"}:
            raise FormatError(f"command table: {key} needs exactly text, track, color")
        if isinstance(val["track"], bool) or not isinstance(val["track"], int):
            raise FormatError(f"command table: {key}.track must be an integer")
        entries[kind] = CommandEntry(str(val["text"]), val["track"], str(val["color"]))
    try:
        return CommandTable(entries)
    except ValueError as exc:
        raise FormatError(f"command table: {exc}") from None


_SCENARIO_KEYS = {"fs", "duration", "events", "amplitudes", "noise_rms", "drift", "seed", "timing"}


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    t = spec.timing
    return {
        "fs": spec.fs,
        "duration": spec.duration,
        "seed": spec.seed,
        "noise_rms": spec.noise_rms,
        "drift": spec.drift,
        "amplitudes": {k.value: a for k, a in spec.amplitudes.items()},
        "timing": {
            "saccade": t.saccade,
            "up": t.up,
            "blink": t.blink,
            "double_blink_gap": t.double_blink_gap,
            "edge": t.edge,
        },
        "events": [[k.value, onset] for k, onset in spec.events],
    }


def scenario_from_dict(data: dict, extra_keys: Iterable[str] = ()) -> ScenarioSpec:
    unknown = sorted(set(data) - _SCENARIO_KEYS - set(extra_keys))
    if unknown:
        raise FormatError(f"scenario: unknown field {unknown[0]!r}")
    try:
        events = tuple((K.parse(k), float(t)) for k, t in data.get("events", []))
        amps = {K.parse(k): float(a) for k, a in data.get("amplitudes", {}).items()}
        timing = WaveformTiming(**data.get("timing", {}))
        return ScenarioSpec(
            fs=float(data.get("fs", 250.0)),
            duration=float(data["duration"]),
            events=events,
            amplitudes=amps,
            noise_rms=float(data.get("noise_rms", 0.0)),
            drift=float(data.get("drift", 0.0)),
            seed=int(data.get("seed", 0)),
            timing=timing,
        )
    except KeyError as exc:
        raise FormatError(f"scenario: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise FormatError(f"scenario: {exc}") from None


def read_scenario_dict(source) -> dict:
    return _load_object(source, "scenario")


def write_scenario(spec: ScenarioSpec, target, **extra) -> None:
    data = scenario_to_dict(spec)
    data.update(extra)
    _dump_object(data, target)


# -- NDJSON streams ---------------------------------------------------------


def event_record(ev: MovementEvent) -> dict:
    return {"kind": ev.kind.value, "onset": ev.onset, "duration": ev.duration, "peak": ev.peak}


def write_events(events: Iterable[MovementEvent], target) -> None:
    with _open(target, "w") as fh:
        for ev in events:
            fh.write(json.dumps(event_record(ev), separators=(",", ":")) + "\n")


def _ndjson_lines(source, what: str):
    with _open(source, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{what}: invalid JSON ({exc.msg})", lineno) from None
            if not isinstance(obj, dict):
                raise FormatError(f"{what}: expected an object", lineno)
            yield lineno, obj


def read_events(source) -> list[MovementEvent]:
    out = []
    for lineno, obj in _ndjson_lines(source, "events"):
        if set(obj) != {"kind", "onset", "duration", "peak"}:
            raise FormatError("events: fields must be kind, onset, duration, peak", lineno)
        try:
            out.append(
                MovementEvent(K.parse(obj["kind"]), float(obj["onset"]), float(obj["duration"]), float(obj["peak"]))
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(f"events: {exc}", lineno) from None
    return out


def write_commands(commands: Iterable[Command], target) -> None:
    with _open(target, "w") as fh:
        for cmd in commands:
            fh.write(command_to_ndjson(cmd) + "\n")


def read_commands(source) -> list[Command]:
    out = []
    for lineno, obj in _ndjson_lines(source, "commands"):
        if set(obj) != {"t", "kind", "text", "track", "color"}:
            raise FormatError("commands: fields must be t, kind, text, track, color", lineno)
        try:
            out.append(Command(float(obj["t"]), K.parse(obj["kind"]), obj["text"], int(obj["track"]), obj["color"]))
        except (TypeError, ValueError) as exc:
            raise FormatError(f"commands: {exc}", lineno) from None
    return out


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
