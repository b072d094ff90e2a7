"""Movement-to-command mapping and output sinks.

Audio is modeled as the track number a DFPlayer-style module would be told
to play; the display is a 16x2 character LCD, so text is capped at 32
characters.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .errors import ContractViolation, SinkError, SpecificationError
from .model import EVENT_KINDS, Command, MovementEvent, MovementKind

K = MovementKind

DISPLAY_CHARS = 32


@dataclass(frozen=True)
class CommandEntry:
    text: str
    track: int
    color: str


class CommandTable(Mapping[MovementKind, CommandEntry]):
    """Total mapping from every event kind to its display/audio/indicator output."""

    def __init__(self, entries: Mapping[MovementKind, CommandEntry]):
        self._entries = {K(k) if not isinstance(k, K) else k: v for k, v in entries.items()}
        missing = [k for k in EVENT_KINDS if k not in self._entries]
        if missing:
            raise SpecificationError(f"command table missing kinds: {', '.join(map(str, missing))}")
        if K.NEUTRAL in self._entries:
            raise SpecificationError("Neutral cannot carry a command")
        tracks = [e.track for e in self._entries.values()]
        if len(set(tracks)) != len(tracks):
            raise SpecificationError("track numbers must be unique")
        for kind, e in self._entries.items():
            if not e.text:
                raise SpecificationError(f"empty text for {kind}")
            if not (isinstance(e.track, int) and e.track >= 1):
                raise SpecificationError(f"track for {kind} must be a positive integer")

    def __getitem__(self, kind: MovementKind) -> CommandEntry:
        return self._entries[kind]

    def __iter__(self):
        return (k for k in EVENT_KINDS if k in self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CommandTable):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"CommandTable({self._entries!r})"


def default_table() -> CommandTable:
    # Only the Left entry is a documented clinical request; the rest are placeholders.
    return CommandTable(
        {
            K.LEFT: CommandEntry("Call the Doctor", 1, "red"),
            K.RIGHT: CommandEntry("I need water", 2, "green"),
            K.UP: CommandEntry("I need help sitting up", 3, "yellow"),
            K.DOWN: CommandEntry("I am in pain", 4, "orange"),
            K.BLINK: CommandEntry("Yes", 5, "blue"),
            K.DOUBLE_BLINK: CommandEntry("No", 6, "white"),
        }
    )


def map_event(event: MovementEvent, table: CommandTable) -> Command:
    if event.kind is K.NEUTRAL:
        raise ContractViolation("Neutral is not an event and has no command")
    entry = table[event.kind]
    text = entry.text
    truncated = len(text) > DISPLAY_CHARS
    if truncated:
        text = text[:DISPLAY_CHARS]
    return Command(event.onset, event.kind, text, entry.track, entry.color, truncated)


def command_record(cmd: Command) -> dict:
    return {"t": cmd.t, "kind": cmd.kind.value, "text": cmd.text, "track": cmd.track, "color": cmd.color}


def command_to_ndjson(cmd: Command) -> str:
    return json.dumps(command_record(cmd), ensure_ascii=False, separators=(",", ":"))


def render_console(cmd: Command) -> str:
    return f"{cmd.t:.3f} {cmd.kind.value} {cmd.text}"


class Sink:
    name = "sink"

    def write(self, cmd: Command) -> None:
        raise NotImplementedError

    def close(self) -> None:
        pass


class StreamSink(Sink):
    """Writes one formatted line per command to a text stream."""

    def __init__(self, stream: IO[str], name: str, formatter):
        self.stream = stream
        self.name = name
        self.formatter = formatter

    def write(self, cmd: Command) -> None:
        try:
            self.stream.write(self.formatter(cmd) + "\n")
        except (OSError, ValueError) as exc:
            raise SinkError(self.name, exc) from exc

    def flush(self) -> None:
        try:
            self.stream.flush()
        except (OSError, ValueError) as exc:
            raise SinkError(self.name, exc) from exc


def monitoring_sink(stream: IO[str], name: str = "monitoring") -> StreamSink:
    return StreamSink(stream, name, command_to_ndjson)


def console_sink(stream: IO[str] | None = None) -> StreamSink:
    return StreamSink(stream or sys.stdout, "console", render_console)


class CommandLog(Sink):
    """In-memory record of emitted commands."""

    name = "log"

    def __init__(self):
        self.commands: list[Command] = []

    def write(self, cmd: Command) -> None:
        self.commands.append(cmd)


def emit(command: Command, sinks: Iterable[Sink]) -> None:
    for sink in sinks:
        sink.write(command)


def emit_all(events: Iterable[MovementEvent], table: CommandTable, sinks: Iterable[Sink]) -> list[Command]:
    sinks = list(sinks)
    commands = []
    for ev in events:
        cmd = map_event(ev, table)
        emit(cmd, sinks)
        commands.append(cmd)
    return commands
