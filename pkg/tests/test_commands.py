import io
import json

import pytest

from eogpipe.commands import (
    CommandEntry,
    CommandLog,
    CommandTable,
    StreamSink,
    console_sink,
    default_table,
    emit,
    emit_all,
    map_event,
    monitoring_sink,
)
from eogpipe.errors import ContractViolation, SinkError, SpecificationError
from eogpipe.formats import read_commands
from eogpipe.model import EVENT_KINDS, Command, MovementEvent, MovementKind as K


def left_at(t=2.5):
    return MovementEvent(K.LEFT, t, 0.5, -0.01)


def test_default_table():
    table = default_table()
    assert table[K.LEFT].text == "Call the Doctor"
    assert set(table) == set(EVENT_KINDS)
    assert sorted(e.track for e in table.values()) == [1, 2, 3, 4, 5, 6]


def test_table_must_be_total_with_unique_tracks():
    entries = dict(default_table().items())
    del entries[K.UP]
    with pytest.raises(SpecificationError):
        CommandTable(entries)
    entries = dict(default_table().items())
    entries[K.UP] = CommandEntry("x", 1, "red")
    with pytest.raises(SpecificationError):
        CommandTable(entries)
    entries[K.UP] = CommandEntry("x", 0, "red")
    with pytest.raises(SpecificationError):
        CommandTable(entries)


def test_map_left():
    cmd = map_event(left_at(), default_table())
    assert cmd == Command(2.5, K.LEFT, "Call the Doctor", 1, "red", False)


def test_truncation_to_display():
    entries = dict(default_table().items())
    entries[K.RIGHT] = CommandEntry("x" * 40, 2, "green")
    cmd = map_event(MovementEvent(K.RIGHT, 1.0, 0.5, 0.01), CommandTable(entries))
    assert cmd.text == "x" * 32 and cmd.truncated


def test_neutral_has_no_command():
    with pytest.raises(ContractViolation):
        map_event(MovementEvent(K.NEUTRAL, 1.0, 0.1, 0.0), default_table())


def test_map_is_pure():
    assert map_event(left_at(), default_table()) == map_event(left_at(), default_table())


def test_monitoring_line_exact():
    buf = io.StringIO()
    emit(map_event(left_at(), default_table()), [monitoring_sink(buf)])
    assert buf.getvalue() == '{"t":2.5,"kind":"Left","text":"Call the Doctor","track":1,"color":"red"}\n'
    assert json.loads(buf.getvalue()) == {
        "t": 2.5, "kind": "Left", "text": "Call the Doctor", "track": 1, "color": "red",
    }


def test_console_rendering():
    buf = io.StringIO()
    emit(map_event(left_at(), default_table()), [console_sink(buf)])
    assert buf.getvalue() == "2.500 Left Call the Doctor\n"


def test_zero_commands():
    buf, log = io.StringIO(), CommandLog()
    assert emit_all([], default_table(), [monitoring_sink(buf), log]) == []
    assert buf.getvalue() == "" and log.commands == []


def test_order_and_roundtrip():
    events = [MovementEvent(k, 1.0 + i, 0.2, 0.1) for i, k in enumerate([K.RIGHT, K.BLINK, K.LEFT])]
    buf, log = io.StringIO(), CommandLog()
    cmds = emit_all(events, default_table(), [monitoring_sink(buf), log])
    lines = buf.getvalue().splitlines()
    assert len(lines) == 3
    assert [json.loads(x)["kind"] for x in lines] == ["Right", "Blink", "Left"]
    assert log.commands == cmds
    assert read_commands(io.StringIO(buf.getvalue())) == cmds


def test_sink_failure_names_sink():
    closed = io.StringIO()
    closed.close()
    with pytest.raises(SinkError) as exc:
        emit(map_event(left_at(), default_table()), [StreamSink(closed, "monitoring", str)])
    assert exc.value.sink == "monitoring"
