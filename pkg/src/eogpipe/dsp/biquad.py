"""Second-order sections and cascades of them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from ..errors import NumericOverflowError, UnstableSectionError
from . import kernels


@dataclass(frozen=True)
class BiquadSection:
    """One normalized second-order stage (``a0 == 1``)."""

    b0: float
    b1: float
    b2: float
    a1: float
    a2: float

    def __post_init__(self):
        for name in ("b0", "b1", "b2", "a1", "a2"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ValueError(f"coefficient {name} is not finite: {val!r}")
            object.__setattr__(self, name, val)

    @classmethod
    def from_ba(cls, b: Sequence[float], a: Sequence[float], strict: bool = False) -> "BiquadSection":
        """Build from ``b=[b0, b1, b2]`` and either ``a=[a1, a2]`` or ``a=[1, a1, a2]``.

        With ``strict=True`` an unstable pole pair raises
        :class:`UnstableSectionError`.
        """
        if len(a) == 3:
            if a[0] != 1:
                raise ValueError("a0 must be 1 for a normalized section")
            a = a[1:]
        sec = cls(b[0], b[1], b[2], a[0], a[1])
        if strict and not stability_check(sec):
            raise UnstableSectionError(f"poles outside the unit circle: a1={sec.a1}, a2={sec.a2}")
        return sec

    @property
    def b(self) -> tuple[float, float, float]:
        return (self.b0, self.b1, self.b2)

    @property
    def a(self) -> tuple[float, float, float]:
        return (1.0, self.a1, self.a2)

    def as_row(self) -> tuple[float, float, float, float, float]:
        return (self.b0, self.b1, self.b2, self.a1, self.a2)


@dataclass
class BiquadState:
    z1: float = 0.0
    z2: float = 0.0

    def reset(self) -> None:
        self.z1 = 0.0
        self.z2 = 0.0


def stability_check(section: BiquadSection) -> bool:
    """True iff both poles lie strictly inside the unit circle."""
    return abs(section.a2) < 1.0 and abs(section.a1) < 1.0 + section.a2


def biquad_step(state: BiquadState, section: BiquadSection, x: float, index: int = 0) -> float:
    """Push one sample through a direct-form-II section, updating ``state``.

    ``index`` only labels the error raised for a non-finite input.
    """
    if not math.isfinite(x):
        raise NumericOverflowError(index, x)
    w = x - section.a1 * state.z1 - section.a2 * state.z2
    out = section.b0 * w + section.b1 * state.z1 + section.b2 * state.z2
    state.z2 = state.z1
    state.z1 = w
    return out


class FilterCascade:
    """Ordered stack of biquad sections with independent state per channel.

    Channels are created lazily on first use with zeroed state, so one
    cascade object can filter the horizontal and vertical signals without
    cross-talk. State persists across :meth:`process` calls, which is what
    makes chunked streaming equal to one-shot filtering.
    """

    def __init__(self, sections: Iterable[BiquadSection]):
        self.sections: tuple[BiquadSection, ...] = tuple(sections)
        if not self.sections:
            raise ValueError("a cascade needs at least one section")
        self._coeffs = np.array([s.as_row() for s in self.sections], dtype=np.float64)
        self._coeffs.setflags(write=False)
        self._states: dict[Hashable, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.sections)

    def __repr__(self) -> str:
        return f"FilterCascade({list(self.sections)!r})"

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only ``(n_sections, 5)`` array of ``(b0, b1, b2, a1, a2)``."""
        return self._coeffs

    def _state_array(self, channel: Hashable) -> np.ndarray:
        st = self._states.get(channel)
        if st is None:
            st = np.zeros((len(self.sections), 2), dtype=np.float64)
            self._states[channel] = st
        return st

    def state(self, channel: Hashable = "h") -> list[BiquadState]:
        """Snapshot of the per-section state for ``channel``."""
        return [BiquadState(float(z1), float(z2)) for z1, z2 in self._state_array(channel)]

    def set_state(self, channel: Hashable, states: Sequence[BiquadState]) -> None:
        if len(states) != len(self.sections):
            raise ValueError("state length must equal section count")
        arr = self._state_array(channel)
        for k, st in enumerate(states):
            arr[k, 0] = st.z1
            arr[k, 1] = st.z2

    def reset(self, channel: Hashable | None = None) -> None:
        if channel is None:
            self._states.clear()
        else:
            self._states.pop(channel, None)

    def clone(self) -> "FilterCascade":
        """Copy with the same coefficients and a deep copy of all channel states."""
        twin = FilterCascade(self.sections)
        twin._states = {k: v.copy() for k, v in self._states.items()}
        return twin

    def process(self, samples, channel: Hashable = "h") -> np.ndarray:
        x = np.asarray(samples, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError("expected a 1-D signal")
        if x.size == 0:
            return np.empty(0, dtype=np.float64)
        bad = np.flatnonzero(~np.isfinite(x))
        if bad.size:
            raise NumericOverflowError(int(bad[0]), float(x[bad[0]]))
        return kernels.sos_process(self._coeffs, self._state_array(channel), x)


def cascade_process(cascade: FilterCascade, samples, channel: Hashable = "h") -> np.ndarray:
    return cascade.process(samples, channel)


# Fixed coefficients of the four-stage reference filter, in cascade order.
REFERENCE_SECTIONS = (
    ((0.09797471, 0.19594942, 0.09797471), (0.02977423, 0.04296318)),
    ((1.0, 2.0, 1.0), (0.08383952, 0.46067709)),
    ((1.0, -2.0, 1.0), (-1.92167271, 0.92347975)),
    ((1.0, -2.0, 1.0), (-1.96758891, 0.96933514)),
)


def paper_cascade() -> FilterCascade:
    """The fixed four-section reference filter with zeroed state.

    Although described as a low-pass design, the last two sections have
    double zeros at DC, so the cascade behaves as a band-pass.
    """
    return FilterCascade(BiquadSection.from_ba(b, a, strict=True) for b, a in REFERENCE_SECTIONS)


def identity_section() -> BiquadSection:
    return BiquadSection(1.0, 0.0, 0.0, 0.0, 0.0)
