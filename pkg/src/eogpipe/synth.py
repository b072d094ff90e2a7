"""Labeled synthetic EOG sessions and the analog front-end gain model."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .errors import SpecificationError
from .model import DEFAULT_FS, GroundTruthLabel, MovementKind, SessionRecording

K = MovementKind

SACCADE_AMPLITUDE = 100e-6
BLINK_AMPLITUDE = 200e-6
DEFAULT_AMPLITUDES = {
    K.LEFT: SACCADE_AMPLITUDE,
    K.RIGHT: SACCADE_AMPLITUDE,
    K.UP: SACCADE_AMPLITUDE,
    K.DOWN: SACCADE_AMPLITUDE,
    K.BLINK: BLINK_AMPLITUDE,
    K.DOUBLE_BLINK: BLINK_AMPLITUDE,
}
#: minimum gap between one event's end and the next onset
MIN_EVENT_GAP = 0.2
CALIBRATION_ORDER = (K.LEFT, K.RIGHT, K.UP, K.DOWN, K.BLINK)


@dataclass(frozen=True)
class FrontEndModel:
    """Instrumentation amp followed by an active band-pass stage.

    The band edges are kept as metadata only; no analog filtering is
    simulated, since a 20 Hz high-pass would erase the slow gaze plateaus.
    """

    ina_gain: float = 1.0
    bandpass_gain: float = 152.5
    band_lo: float = 20.0
    band_hi: float = 500.0

    def __post_init__(self):
        if not (self.ina_gain > 0 and self.bandpass_gain > 0):
            raise SpecificationError("front-end gains must be positive")
        if not self.band_lo < self.band_hi:
            raise SpecificationError("front-end band_lo must be below band_hi")

    @property
    def gain(self) -> float:
        return self.ina_gain * self.bandpass_gain


@dataclass(frozen=True)
class WaveformTiming:
    """Shape parameters of the synthetic waveforms, in seconds."""

    saccade: float = 0.6
    up: float = 0.6
    blink: float = 0.15
    double_blink_gap: float = 0.3
    edge: float = 0.02

    def length(self, kind: MovementKind) -> float:
        if kind is K.BLINK:
            return self.blink
        if kind is K.DOUBLE_BLINK:
            return self.double_blink_gap + self.blink
        if kind is K.UP:
            return self.up
        return self.saccade


@dataclass(frozen=True)
class ScenarioSpec:
    fs: float = DEFAULT_FS
    duration: float = 10.0
    events: tuple[tuple[MovementKind, float], ...] = ()
    amplitudes: Mapping[MovementKind, float] = field(default_factory=lambda: dict(DEFAULT_AMPLITUDES))
    noise_rms: float = 0.0
    drift: float = 0.0
    seed: int = 0
    timing: WaveformTiming = field(default_factory=WaveformTiming)

    def __post_init__(self):
        events = tuple((K.parse(k) if isinstance(k, str) else K(k), float(t)) for k, t in self.events)
        amps = dict(DEFAULT_AMPLITUDES)
        amps.update({K.parse(k) if isinstance(k, str) else k: float(a) for k, a in self.amplitudes.items()})
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "amplitudes", amps)

    def scaled(self, c: float) -> "ScenarioSpec":
        """Same scenario with every event amplitude multiplied by ``c``."""
        return replace(self, amplitudes={k: a * c for k, a in self.amplitudes.items()})

    def validate(self) -> None:
        if not self.fs > 0:
            raise SpecificationError("fs must be positive")
        if not self.duration > 0:
            raise SpecificationError("duration must be positive")
        if self.noise_rms < 0:
            raise SpecificationError("noise_rms must be non-negative")
        prev_end = -math.inf
        prev_kind = None
        for kind, onset in self.events:
            if kind is K.NEUTRAL:
                raise SpecificationError("Neutral cannot be planned as an event")
            end = onset + self.timing.length(kind)
            if onset < 0 or end > self.duration:
                raise SpecificationError(f"{kind} at {onset} s does not fit in {self.duration} s")
            if onset < prev_end:
                raise SpecificationError(f"{kind} at {onset} s overlaps the preceding {prev_kind}")
            if onset - prev_end < MIN_EVENT_GAP:
                raise SpecificationError(
                    f"{kind} at {onset} s starts less than {MIN_EVENT_GAP} s after {prev_kind} ends"
                )
            prev_end, prev_kind = end, kind


def _raised_cosine_window(t: np.ndarray, width: float, edge: float) -> np.ndarray:
    """Unit plateau on ``[0, width]`` with raised-cosine rise and fall of ``edge`` seconds."""
    out = np.zeros_like(t)
    inside = (t >= 0) & (t <= width)
    out[inside] = 1.0
    rise = (t >= 0) & (t < edge)
    out[rise] = 0.5 * (1.0 - np.cos(np.pi * t[rise] / edge))
    fall = (t > width - edge) & (t <= width)
    out[fall] = 0.5 * (1.0 - np.cos(np.pi * (width - t[fall]) / edge))
    return out


def _event_waveform(kind: MovementKind, rel_t: np.ndarray, timing: WaveformTiming) -> tuple[np.ndarray, str]:
    """Unit-amplitude waveform for one event and the channel it lives on."""
    e = timing.edge
    if kind in (K.LEFT, K.RIGHT):
        sign = -1.0 if kind is K.LEFT else 1.0
        return sign * _raised_cosine_window(rel_t, timing.saccade, e), "h"
    if kind is K.DOWN:
        return -_raised_cosine_window(rel_t, timing.saccade, e), "v"
    if kind is K.UP:
        return _raised_cosine_window(rel_t, timing.up, e), "v"
    if kind is K.BLINK:
        return _raised_cosine_window(rel_t, timing.blink, e), "v"
    if kind is K.DOUBLE_BLINK:
        first = _raised_cosine_window(rel_t, timing.blink, e)
        second = _raised_cosine_window(rel_t - timing.double_blink_gap, timing.blink, e)
        return first + second, "v"
    raise SpecificationError(f"no waveform for {kind}")


def synth_session(spec: ScenarioSpec, frontend: FrontEndModel | None = None) -> SessionRecording:
    """Render ``spec`` into a labeled two-channel session at post-gain volts.

    Event onsets are snapped to the sample grid so that every label onset
    coincides with a sample time.
    """
    frontend = frontend or FrontEndModel()
    spec.validate()
    fs = spec.fs
    n = int(round(spec.duration * fs)) + 1
    t = np.arange(n, dtype=np.float64) / fs
    h = np.zeros(n)
    v = np.zeros(n)
    labels = []
    for kind, onset in spec.events:
        idx = int(round(onset * fs))
        onset_t = t[idx]
        # only touch the samples the event can reach
        span = int(math.ceil(spec.timing.length(kind) * fs)) + 2
        sl = slice(idx, min(n, idx + span))
        wave, channel = _event_waveform(kind, t[sl] - onset_t, spec.timing)
        target = h if channel == "h" else v
        target[sl] += spec.amplitudes[kind] * wave
        labels.append(GroundTruthLabel(kind, float(onset_t), spec.timing.length(kind)))

    if spec.noise_rms > 0:
        rng = np.random.default_rng(spec.seed)
        noise = rng.normal(0.0, spec.noise_rms, size=(2, n))
        h += noise[0]
        v += noise[1]
    if spec.drift:
        h += spec.drift * t
        v += spec.drift * t

    g = frontend.gain
    return SessionRecording(fs, t, h * g, v * g, labels)


def calibration_scenario(
    fs: float = DEFAULT_FS,
    amplitudes: Mapping[MovementKind, float] | None = None,
    repetitions: int = 1,
    *,
    spacing: float = 1.5,
    lead: float = 1.0,
    noise_rms: float = 0.0,
    drift: float = 0.0,
    seed: int = 0,
    timing: WaveformTiming | None = None,
) -> ScenarioSpec:
    if repetitions < 1:
        raise SpecificationError("repetitions must be at least 1")
    kinds = [k for _ in range(repetitions) for k in CALIBRATION_ORDER]
    events = tuple((k, lead + i * spacing) for i, k in enumerate(kinds))
    duration = lead + (len(kinds) - 1) * spacing + lead + 0.6
    return ScenarioSpec(
        fs=fs,
        duration=duration,
        events=events,
        amplitudes=dict(amplitudes or DEFAULT_AMPLITUDES),
        noise_rms=noise_rms,
        drift=drift,
        seed=seed,
        timing=timing or WaveformTiming(),
    )


def synth_calibration_sweep(
    fs: float = DEFAULT_FS,
    amplitudes: Mapping[MovementKind, float] | None = None,
    repetitions: int = 1,
    frontend: FrontEndModel | None = None,
    **kwargs,
) -> SessionRecording:
    """Guided sweep cycling Left, Right, Up, Down, Blink ``repetitions`` times."""
    return synth_session(calibration_scenario(fs, amplitudes, repetitions, **kwargs), frontend)


def random_event_plan(
    count: int,
    seed: int = 0,
    *,
    spacing: float = 2.0,
    jitter: float = 0.3,
    lead: float = 1.0,
    kinds: Sequence[MovementKind] = tuple(DEFAULT_AMPLITUDES),
) -> tuple[tuple[MovementKind, float], ...]:
    """``count`` events of random kind, one per ``spacing`` slot with onset jitter."""
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(kinds), size=count)
    offsets = rng.uniform(0.0, jitter, size=count)
    return tuple(
        (kinds[int(p)], round(lead + i * spacing + float(o), 3)) for i, (p, o) in enumerate(zip(picks, offsets))
    )
