"""Frequency and impulse responses of a cascade."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from ..errors import DomainError
from .biquad import FilterCascade
from . import kernels


@dataclass(frozen=True, eq=False)
class FrequencyResponse:
    omega: np.ndarray
    response: np.ndarray

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.response)

    @property
    def magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.response))

    @property
    def phase_rad(self) -> np.ndarray:
        return np.angle(self.response)

    def __len__(self) -> int:
        return len(self.omega)


def freq_response(cascade: FilterCascade, omega) -> FrequencyResponse:
    """Evaluate the product of section responses on the unit circle.

    ``omega`` is in radians/sample and must lie in ``[0, pi]``.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    if w.size and (not np.all(np.isfinite(w)) or w.min() < 0.0 or w.max() > np.pi):
        raise DomainError("omega must lie in [0, pi] radians/sample")
    z1 = np.exp(-1j * w)
    z2 = z1 * z1
    h = np.ones_like(z1)
    for sec in cascade.sections:
        h = h * (sec.b0 + sec.b1 * z1 + sec.b2 * z2) / (1.0 + sec.a1 * z1 + sec.a2 * z2)
    return FrequencyResponse(w, h)


def uniform_grid(points: int) -> np.ndarray:
    """``points`` evenly spaced frequencies from 0 to pi inclusive."""
    if points < 1:
        raise DomainError("need at least one grid point")
    if points == 1:
        return np.zeros(1)
    return np.linspace(0.0, np.pi, points)


def hz_to_omega(f, fs: float):
    return 2.0 * np.pi * np.asarray(f, dtype=np.float64) / fs


def impulse_response(cascade: FilterCascade, n: int) -> np.ndarray:
    """First ``n`` samples of the zero-state impulse response.

    Runs on a private state so the caller's streaming state is untouched.
    """
    if n < 1:
        raise DomainError("impulse response length must be at least 1")
    x = np.zeros(n)
    x[0] = 1.0
    state = np.zeros((len(cascade), 2), dtype=np.float64)
    return kernels.sos_process(cascade.coeffs, state, x)


def write_response_csv(resp: FrequencyResponse, fh: TextIO) -> None:
    """Write ``omega_rad,magnitude_db,phase_rad`` rows at 9 significant digits.

    Zero magnitude is written as ``-inf`` dB.
    """
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["omega_rad", "magnitude_db", "phase_rad"])
    for w, m, p in zip(resp.omega.tolist(), resp.magnitude_db.tolist(), resp.phase_rad.tolist()):
        writer.writerow([f"{w:.9g}", f"{m:.9g}", f"{p:.9g}"])
