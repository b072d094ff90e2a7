"""Butterworth band-pass design as a biquad cascade.

Analog low-pass prototype -> band-pass transform -> bilinear transform with
prewarped band edges, so the -3 dB points land exactly on ``f_lo``/``f_hi``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DesignError
from .biquad import BiquadSection, FilterCascade, stability_check

SUPPORTED_ORDERS = (2, 4)


def _prewarp(f: float, fs: float) -> float:
    return 2.0 * fs * math.tan(math.pi * f / fs)


def _pair_poles(poles: np.ndarray) -> list[tuple[float, float]]:
    """Group digital poles into ``(a1, a2)`` pairs, ascending by magnitude."""
    tol = 1e-12
    upper = [p for p in poles if p.imag > tol]
    real = sorted((p.real for p in poles if abs(p.imag) <= tol), key=abs)
    pairs = [(-2.0 * p.real, abs(p) ** 2, abs(p)) for p in upper]
    if len(real) % 2:
        raise DesignError("odd number of real poles; cannot form second-order sections")
    for r1, r2 in zip(real[::2], real[1::2]):
        pairs.append((-(r1 + r2), r1 * r2, max(abs(r1), abs(r2))))
    pairs.sort(key=lambda item: item[2])
    return [(a1, a2) for a1, a2, _ in pairs]


def design_butterworth_bandpass(order: int, fs: float, f_lo: float, f_hi: float) -> FilterCascade:
    """Design a Butterworth band-pass of the given prototype ``order``.

    The result has ``order`` sections (filter order ``2 * order``). The
    first half carry ``(1 + z^-1)^2`` numerators, the second half
    ``(1 - z^-1)^2``; the overall gain is folded into the first section and
    normalized to unity at the band's geometric centre.
    """
    if order not in SUPPORTED_ORDERS:
        raise DesignError(f"order must be one of {SUPPORTED_ORDERS}, got {order!r}")
    if not (fs > 0 and math.isfinite(fs)):
        raise DesignError(f"sample rate must be positive, got {fs!r}")
    if not (0.0 < f_lo < f_hi < fs / 2.0):
        raise DesignError(f"need 0 < f_lo < f_hi < fs/2, got f_lo={f_lo}, f_hi={f_hi}, fs={fs}")

    w_lo = _prewarp(f_lo, fs)
    w_hi = _prewarp(f_hi, fs)
    bw = w_hi - w_lo
    w0_sq = w_lo * w_hi

    k = np.arange(1, order + 1)
    proto = np.exp(1j * np.pi * (2 * k + order - 1) / (2 * order))

    # each prototype pole p maps to the two roots of s^2 - p*bw*s + w0^2
    disc = np.sqrt((proto * bw) ** 2 - 4.0 * w0_sq + 0j)
    s_poles = np.concatenate([(proto * bw + disc) / 2.0, (proto * bw - disc) / 2.0])

    fs2 = 2.0 * fs
    z_poles = (fs2 + s_poles) / (fs2 - s_poles)

    pairs = _pair_poles(z_poles)
    half = order // 2
    sections = []
    for i, (a1, a2) in enumerate(pairs):
        b = (1.0, 2.0, 1.0) if i < half else (1.0, -2.0, 1.0)
        sections.append(BiquadSection(b[0], b[1], b[2], a1, a2))

    # unity gain at the analog centre frequency mapped through the bilinear warp
    w_center = 2.0 * math.atan(math.sqrt(w0_sq) / fs2)
    zc = np.exp(-1j * w_center)
    h = 1.0 + 0j
    for sec in sections:
        h *= (sec.b0 + sec.b1 * zc + sec.b2 * zc * zc) / (1.0 + sec.a1 * zc + sec.a2 * zc * zc)
    g = 1.0 / abs(h)
    first = sections[0]
    sections[0] = BiquadSection(g * first.b0, g * first.b1, g * first.b2, first.a1, first.a2)

    if not all(stability_check(s) for s in sections):
        raise DesignError("design produced an unstable section; band too close to DC or Nyquist")
    return FilterCascade(sections)
