"""Per-user threshold profiles built from a labeled calibration sweep."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .errors import DegenerateCalibrationError, IncompleteCalibrationError
from .model import MovementKind, SessionRecording

K = MovementKind

REQUIRED_KINDS = (K.LEFT, K.RIGHT, K.UP, K.DOWN, K.BLINK)

# channel and extremum direction used to read each kind's peak
_PEAK_RULE = {
    K.LEFT: ("h", np.min),
    K.RIGHT: ("h", np.max),
    K.UP: ("v", np.max),
    K.DOWN: ("v", np.min),
    K.BLINK: ("v", np.max),
}


@dataclass(frozen=True)
class CalibrationProfile:
    """Detection thresholds (volts, absolute) and timing windows (seconds)."""

    neutral_mean_h: float
    neutral_mean_v: float
    left: float
    right: float
    up: float
    down: float
    blink: float
    k: float = 0.6
    min_hold: float = 0.08
    refractory: float = 0.2
    blink_max_dur: float = 0.35
    long_blink_min_dur: float = 0.45
    double_blink_window: float = 0.5

    VOLTAGE_FIELDS = ("neutral_mean_h", "neutral_mean_v", "left", "right", "up", "down", "blink")
    TIMING_FIELDS = ("min_hold", "refractory", "blink_max_dur", "long_blink_min_dur", "double_blink_window")

    @property
    def vertical_positive(self) -> float:
        """Threshold for the shared up/blink direction (the less demanding of the two)."""
        return min(self.up, self.blink)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in fields(cls))

    def to_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in self.field_names()}

    def with_timing(self, **kwargs) -> "CalibrationProfile":
        return replace(self, **kwargs)


def validate_profile(profile: CalibrationProfile) -> list[str]:
    problems = []
    values = profile.to_dict()
    for name, val in values.items():
        if not isinstance(val, (int, float)) or not math.isfinite(val):
            problems.append(f"{name} is not a finite number")
    if problems:
        return problems
    p = profile
    if not p.left < p.neutral_mean_h < p.right:
        problems.append("ordering violation: need left < neutral_mean_h < right")
    if not p.down < p.neutral_mean_v:
        problems.append("ordering violation: need down < neutral_mean_v")
    if not (p.neutral_mean_v < p.blink and p.neutral_mean_v < p.up):
        problems.append("ordering violation: need neutral_mean_v < up and neutral_mean_v < blink")
    if not 0.0 < p.k < 1.0:
        problems.append(f"k out of range (0, 1): {p.k}")
    for name in CalibrationProfile.TIMING_FIELDS:
        if not values[name] > 0:
            problems.append(f"{name} must be positive")
    if not p.blink_max_dur < p.long_blink_min_dur:
        problems.append("blink_max_dur must be below long_blink_min_dur")
    return problems


def _label_mask(t: np.ndarray, fs: float, onset: float, duration: float) -> np.ndarray:
    """Samples inside ``[onset, onset + duration]``, resolved on the sample grid."""
    t0 = t[0]
    first = math.ceil((onset - t0) * fs - 1e-6)
    last = math.floor((onset + duration - t0) * fs + 1e-6)
    mask = np.zeros(len(t), dtype=bool)
    mask[max(first, 0) : max(last + 1, 0)] = True
    return mask


def calibrate(session: SessionRecording, k: float = 0.6, **timing) -> CalibrationProfile:
    """Derive a profile from a filtered, labeled calibration sweep.

    The neutral level of each channel is the mean over all samples outside
    every labeled window. Each direction's peak is the median, across its
    repetitions, of the channel extremum inside the labeled window; the
    threshold sits a fraction ``k`` of the way from neutral to that peak.
    Extra keyword arguments override the default timing fields.
    """
    if len(session) == 0:
        raise DegenerateCalibrationError("empty session")
    present = {lab.kind for lab in session.labels}
    for kind in REQUIRED_KINDS:
        if kind not in present:
            raise IncompleteCalibrationError(kind)
    t = session.t
    channels = {"h": session.h, "v": session.v}

    labeled = np.zeros(len(t), dtype=bool)
    for lab in session.labels:
        labeled |= _label_mask(t, session.fs, lab.onset, lab.duration)
    if labeled.all():
        raise DegenerateCalibrationError("no unlabeled samples to estimate the neutral level")
    neutral = {name: float(np.mean(x[~labeled])) for name, x in channels.items()}

    thresholds = {}
    for kind in REQUIRED_KINDS:
        chan, pick = _PEAK_RULE[kind]
        x = channels[chan]
        peaks = []
        for lab in session.labels:
            if lab.kind is not kind:
                continue
            m = _label_mask(t, session.fs, lab.onset, lab.duration)
            if m.any():
                peaks.append(float(pick(x[m])))
        if not peaks:
            raise IncompleteCalibrationError(kind)
        peak = float(np.median(peaks))
        base = neutral[chan]
        thresholds[kind] = base + k * (peak - base)

    profile = CalibrationProfile(
        neutral_mean_h=neutral["h"],
        neutral_mean_v=neutral["v"],
        left=thresholds[K.LEFT],
        right=thresholds[K.RIGHT],
        up=thresholds[K.UP],
        down=thresholds[K.DOWN],
        blink=thresholds[K.BLINK],
        k=k,
        **timing,
    )
    problems = validate_profile(profile)
    if problems:
        raise DegenerateCalibrationError("; ".join(problems))
    return profile
