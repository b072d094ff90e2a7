"""Glue between stages: filter selection, per-channel filtering, defaults."""

from __future__ import annotations

from dataclasses import dataclass

from .dsp import FilterCascade, design_butterworth_bandpass, paper_cascade
from .errors import FormatError
from .model import SessionRecording
from .synth import ScenarioSpec, calibration_scenario, random_event_plan

#: extra top-level keys a scenario file may carry for ``run``
RUN_KEYS = ("filter", "calibration")

DEFAULT_FILTER = {"order": 4, "f_lo": 0.01, "f_hi": 30.0}
DEFAULT_CALIBRATION = {"repetitions": 3, "k": 0.6}


@dataclass(frozen=True)
class FilterChoice:
    """Either the fixed reference cascade or a Butterworth design."""

    paper: bool = False
    order: int = 4
    f_lo: float = 0.01
    f_hi: float = 30.0

    def build(self, fs: float) -> FilterCascade:
        if self.paper:
            return paper_cascade()
        return design_butterworth_bandpass(self.order, fs, self.f_lo, self.f_hi)

    @classmethod
    def parse_design(cls, text: str) -> "FilterChoice":
        """Parse ``order,f_lo,f_hi``."""
        parts = text.split(",")
        if len(parts) != 3:
            raise ValueError(f"--design expects order,f_lo,f_hi, got {text!r}")
        return cls(False, int(parts[0]), float(parts[1]), float(parts[2]))

    def as_design_arg(self) -> str:
        return f"{self.order},{self.f_lo!r},{self.f_hi!r}"

    @classmethod
    def from_config(cls, cfg) -> "FilterChoice":
        if cfg == "paper":
            return cls(paper=True)
        if not isinstance(cfg, dict) or set(cfg) - {"order", "f_lo", "f_hi"}:
            raise FormatError("scenario: filter must be \"paper\" or {order, f_lo, f_hi}")
        merged = {**DEFAULT_FILTER, **cfg}
        return cls(False, int(merged["order"]), float(merged["f_lo"]), float(merged["f_hi"]))


def filter_session(session: SessionRecording, cascade: FilterCascade) -> SessionRecording:
    """Filter both channels from zero state; each channel keeps its own state."""
    work = cascade.clone()
    work.reset()
    h = work.process(session.h, "h")
    v = work.process(session.v, "v")
    return session.with_channels(h, v)


def sweep_for(spec: ScenarioSpec, calibration: dict | None = None) -> ScenarioSpec:
    """Calibration sweep matching a scenario's rate, amplitudes, noise and timing.

    Noise uses ``seed + 1`` so the sweep never replays the session's noise.
    """
    cfg = {**DEFAULT_CALIBRATION, **(calibration or {})}
    return calibration_scenario(
        spec.fs,
        spec.amplitudes,
        int(cfg["repetitions"]),
        noise_rms=spec.noise_rms,
        drift=spec.drift,
        seed=spec.seed + 1,
        timing=spec.timing,
    )


def default_scenario(count: int = 100, seed: int = 2024) -> ScenarioSpec:
    """``count`` random events two seconds apart with mild noise and drift."""
    events = random_event_plan(count, seed)
    duration = events[-1][1] + 2.0
    return ScenarioSpec(
        fs=250.0,
        duration=round(duration, 3),
        events=events,
        noise_rms=5e-6,
        drift=2e-7,
        seed=seed,
    )
