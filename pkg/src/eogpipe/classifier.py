"""Threshold state machine turning filtered EOG into movement events.

Per sample the two channels are compared against the calibrated thresholds
to get a candidate kind. A candidate becomes an event once it has been held
for ``min_hold``; its duration is the length of the above-threshold run.
Positive vertical runs are split by duration into Blink (short) and Up
(long); runs in between are dropped. A Blink is held back for
``double_blink_window`` so a second Blink can merge with it into a
DoubleBlink. Every emitted event starts a refractory period.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .calibration import CalibrationProfile
from .errors import ProcessingError
from .model import MovementEvent, MovementKind, SessionRecording

K = MovementKind

_EPS = 1e-9


class Mode(enum.Enum):
    IDLE = "Idle"
    CANDIDATE = "Candidate"
    REFRACTORY = "Refractory"
    BLINK_PENDING = "BlinkPending"


def classify_sample(h: float, v: float, profile: CalibrationProfile) -> MovementKind:
    """Candidate kind for one sample pair; Neutral when no threshold is crossed.

    A positive vertical crossing is reported as Blink; whether it was really
    an Up is only known once its duration is.
    """
    p = profile
    h_kind = v_kind = K.NEUTRAL
    h_norm = v_norm = 0.0
    if h < p.left:
        h_kind, h_norm = K.LEFT, (p.neutral_mean_h - h) / (p.neutral_mean_h - p.left)
    elif h > p.right:
        h_kind, h_norm = K.RIGHT, (h - p.neutral_mean_h) / (p.right - p.neutral_mean_h)
    vpos = p.vertical_positive
    if v < p.down:
        v_kind, v_norm = K.DOWN, (p.neutral_mean_v - v) / (p.neutral_mean_v - p.down)
    elif v > vpos:
        v_kind, v_norm = K.BLINK, (v - p.neutral_mean_v) / (vpos - p.neutral_mean_v)
    if h_kind is K.NEUTRAL:
        return v_kind
    if v_kind is K.NEUTRAL or h_norm >= v_norm:
        return h_kind
    return v_kind


@dataclass(frozen=True)
class SampleCounts:
    """Profile timing converted to whole samples at a given rate."""

    hold: int
    refractory: int
    blink_max: int
    long_min: int
    pair_window: int

    @classmethod
    def from_profile(cls, profile: CalibrationProfile, fs: float) -> "SampleCounts":
        return cls(
            hold=max(1, math.ceil(profile.min_hold * fs - _EPS)),
            refractory=max(1, math.ceil(profile.refractory * fs - _EPS)),
            blink_max=math.floor(profile.blink_max_dur * fs + _EPS),
            long_min=math.ceil(profile.long_blink_min_dur * fs - _EPS),
            pair_window=math.floor(profile.double_blink_window * fs + _EPS),
        )


@dataclass
class _Run:
    kind: MovementKind
    onset_i: int
    onset_t: float
    n: int
    peak: float  # excursion from neutral, signed


class ThresholdClassifier:
    """Streaming classifier; feed samples one at a time or in blocks.

    Not thread-safe: one owner per instance.
    """

    def __init__(self, profile: CalibrationProfile, fs: float, active: bool = True):
        self.profile = profile
        self.fs = float(fs)
        self.counts = SampleCounts.from_profile(profile, self.fs)
        self.active = active
        self._i = 0
        self._cand: _Run | None = None
        self._pending: _Run | None = None
        self._pending_deadline = 0
        self._refractory_until: int | None = None

    @property
    def mode(self) -> Mode:
        if self._refractory_until is not None:
            return Mode.REFRACTORY
        if self._pending is not None:
            return Mode.BLINK_PENDING
        if self._cand is not None:
            return Mode.CANDIDATE
        return Mode.IDLE

    def reset(self) -> None:
        self._cand = None
        self._pending = None
        self._refractory_until = None

    def set_active(self, flag: bool) -> None:
        """Enable or disable detection; disabling drops any partial gesture."""
        flag = bool(flag)
        if flag == self.active:
            return
        self.active = flag
        if not flag:
            self.reset()

    def _excursion(self, kind: MovementKind, h: float, v: float) -> float:
        if kind in (K.LEFT, K.RIGHT):
            return h - self.profile.neutral_mean_h
        return v - self.profile.neutral_mean_v

    def _enter_refractory(self, at: int) -> None:
        self._refractory_until = at + self.counts.refractory

    def _emit_pending(self, out: list, at: int) -> None:
        p = self._pending
        out.append(MovementEvent(K.BLINK, p.onset_t, p.n / self.fs, p.peak))
        self._pending = None
        self._enter_refractory(at)

    def _resolve(self, end_i: int, out: list) -> None:
        """Close the active candidate whose run ended just before ``end_i``."""
        c = self._cand
        self._cand = None
        cnt = self.counts
        if c.n < cnt.hold:
            return
        if c.kind is not K.BLINK:
            out.append(MovementEvent(c.kind, c.onset_t, c.n / self.fs, c.peak))
            self._enter_refractory(end_i)
            return
        if c.n <= cnt.blink_max:
            if self._pending is None:
                self._pending = c
                self._pending_deadline = c.onset_i + cnt.pair_window + 1
                return
            first = self._pending
            self._pending = None
            duration = (end_i - first.onset_i) / self.fs
            out.append(MovementEvent(K.DOUBLE_BLINK, first.onset_t, duration, max(first.peak, c.peak)))
            self._enter_refractory(end_i)
            return
        if self._pending is not None:
            # a long or ambiguous vertical run cannot pair; release the held blink
            self._emit_pending(out, end_i)
            return
        if c.n >= cnt.long_min:
            out.append(MovementEvent(K.UP, c.onset_t, c.n / self.fs, c.peak))
            self._enter_refractory(end_i)

    def feed(self, h: float, v: float, t: float) -> list[MovementEvent]:
        """Advance by one sample; returns the events completed at this sample."""
        i = self._i
        self._i += 1
        out: list[MovementEvent] = []
        if not self.active:
            return out
        if self._refractory_until is not None:
            if i < self._refractory_until:
                return out
            self._refractory_until = None

        kind = classify_sample(h, v, self.profile)
        if self._cand is not None:
            if kind is self._cand.kind:
                c = self._cand
                c.n += 1
                x = self._excursion(kind, h, v)
                if (x < c.peak) if kind in (K.LEFT, K.DOWN) else (x > c.peak):
                    c.peak = x
                return out
            self._resolve(i, out)
            if self._refractory_until is not None:
                return out

        if self._pending is not None:
            if i >= self._pending_deadline:
                self._emit_pending(out, i)
                return out
            if kind is K.BLINK:
                self._cand = _Run(kind, i, t, 1, self._excursion(kind, h, v))
            return out

        if kind is not K.NEUTRAL:
            self._cand = _Run(kind, i, t, 1, self._excursion(kind, h, v))
        return out

    def flush(self) -> list[MovementEvent]:
        """Close out the stream: resolve any open run and release a held blink."""
        out: list[MovementEvent] = []
        if not self.active:
            return out
        if self._cand is not None and self._refractory_until is None:
            self._resolve(self._i, out)
        if self._pending is not None:
            self._emit_pending(out, self._i)
        return out

    def process(self, h: Sequence[float], v: Sequence[float], t: Sequence[float]) -> list[MovementEvent]:
        events: list[MovementEvent] = []
        for hi, vi, ti in zip(h, v, t):
            events.extend(self.feed(hi, vi, ti))
        return events


def classify_stream(
    session: SessionRecording,
    profile: CalibrationProfile,
    active: Sequence[bool] | None = None,
) -> list[MovementEvent]:
    """Classify a whole filtered session.

    ``active`` optionally gives the enable flag per sample (the push-button
    state); samples fed while disabled never contribute to an event.
    """
    h, v, t = session.h, session.v, session.t
    bad = np.flatnonzero(~(np.isfinite(h) & np.isfinite(v)))
    if bad.size:
        raise ProcessingError(int(bad[0]))
    if active is not None and len(active) != len(session):
        raise ValueError("active mask length must match the session")
    clf = ThresholdClassifier(profile, session.fs)
    events: list[MovementEvent] = []
    hs, vs, ts = h.tolist(), v.tolist(), t.tolist()
    if active is None:
        for hi, vi, ti in zip(hs, vs, ts):
            events.extend(clf.feed(hi, vi, ti))
    else:
        for hi, vi, ti, on in zip(hs, vs, ts, active):
            clf.set_active(on)
            events.extend(clf.feed(hi, vi, ti))
    events.extend(clf.flush())
    return events
