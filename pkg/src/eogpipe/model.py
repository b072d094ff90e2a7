"""Domain types shared by every pipeline stage."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

DEFAULT_FS = 250.0


class MovementKind(str, enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"
    UP = "Up"
    DOWN = "Down"
    BLINK = "Blink"
    DOUBLE_BLINK = "DoubleBlink"
    NEUTRAL = "Neutral"

    @classmethod
    def parse(cls, name: str) -> "MovementKind":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown movement kind {name!r}") from None

    def __str__(self) -> str:
        return self.value


#: every kind the classifier may emit
EVENT_KINDS = tuple(k for k in MovementKind if k is not MovementKind.NEUTRAL)


@dataclass(frozen=True)
class Sample:
    t: float
    h: float
    v: float


@dataclass(frozen=True)
class GroundTruthLabel:
    kind: MovementKind
    onset: float
    duration: float

    @property
    def end(self) -> float:
        return self.onset + self.duration


@dataclass(frozen=True)
class MovementEvent:
    kind: MovementKind
    onset: float
    duration: float
    peak: float

    @property
    def end(self) -> float:
        return self.onset + self.duration


@dataclass(frozen=True)
class Command:
    t: float
    kind: MovementKind
    text: str
    track: int
    color: str
    truncated: bool = False


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SessionRecording:
    """Two-channel EOG recording sampled on a uniform grid.

    Channels are stored column-wise as read-only float64 arrays; ``samples``
    gives the row view.
    """

    fs: float
    t: np.ndarray
    h: np.ndarray
    v: np.ndarray
    labels: tuple[GroundTruthLabel, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "fs", float(self.fs))
        object.__setattr__(self, "t", _frozen(self.t))
        object.__setattr__(self, "h", _frozen(self.h))
        object.__setattr__(self, "v", _frozen(self.v))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not (self.t.shape == self.h.shape == self.v.shape) or self.t.ndim != 1:
            raise ValueError("t, h and v must be 1-D arrays of equal length")

    @classmethod
    def from_channels(cls, fs, h, v, t0=0.0, labels=()) -> "SessionRecording":
        n = len(h)
        t = t0 + np.arange(n, dtype=np.float64) / float(fs)
        return cls(fs, t, h, v, labels)

    @classmethod
    def from_samples(cls, fs, samples: Sequence[Sample], labels=()) -> "SessionRecording":
        return cls(
            fs,
            [s.t for s in samples],
            [s.h for s in samples],
            [s.v for s in samples],
            labels,
        )

    def __len__(self) -> int:
        return len(self.t)

    @property
    def samples(self) -> Iterator[Sample]:
        for t, h, v in zip(self.t.tolist(), self.h.tolist(), self.v.tolist()):
            yield Sample(t, h, v)

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self) else 0.0

    def with_channels(self, h, v) -> "SessionRecording":
        return SessionRecording(self.fs, self.t, h, v, self.labels)

    def scaled(self, c: float) -> "SessionRecording":
        return self.with_channels(self.h * c, self.v * c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SessionRecording):
            return NotImplemented
        return (
            self.fs == other.fs
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.h, other.h)
            and np.array_equal(self.v, other.v)
            and self.labels == other.labels
        )

    __hash__ = None


def validate_session(session: SessionRecording, tol: float = 1e-9) -> list[str]:
    """Check the recording invariants and return one finding per violation.

    Findings are short slugs naming the first offending index, e.g.
    ``"non-monotone-at-index-2"``. An empty list means the session is
    well formed. ``tol`` is the allowed deviation (seconds) of each time
    step from ``1/fs``.
    """
    problems: list[str] = []
    if not (np.isfinite(session.fs) and session.fs > 0):
        problems.append("non-positive-sample-rate")
    n = len(session)
    if n == 0:
        problems.append("empty-session")
        return problems

    dt = np.diff(session.t)
    bad = np.flatnonzero(dt <= 0)
    if bad.size:
        problems.append(f"non-monotone-at-index-{bad[0] + 1}")
    elif session.fs > 0:
        off = np.flatnonzero(np.abs(dt - 1.0 / session.fs) > tol)
        if off.size:
            problems.append(f"irregular-step-at-index-{off[0] + 1}")
    if session.t[0] < 0:
        problems.append("negative-time-at-index-0")

    finite = np.isfinite(session.t) & np.isfinite(session.h) & np.isfinite(session.v)
    bad = np.flatnonzero(~finite)
    if bad.size:
        problems.append(f"non-finite-at-index-{bad[0]}")

    first, last = session.t[0], session.t[-1]
    prev_end = -np.inf
    for i, lab in enumerate(session.labels):
        if lab.kind is MovementKind.NEUTRAL:
            problems.append(f"neutral-label-at-index-{i}")
        if not lab.duration > 0:
            problems.append(f"non-positive-label-duration-at-index-{i}")
        if lab.onset < first or lab.end > last:
            problems.append(f"label-out-of-range-at-index-{i}")
        if lab.onset < prev_end:
            problems.append(f"overlapping-label-at-index-{i}")
        prev_end = max(prev_end, lab.end)
    return problems
