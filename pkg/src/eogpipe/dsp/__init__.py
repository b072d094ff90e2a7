"""Biquad filtering, Butterworth design and response analysis."""

from .biquad import (
    BiquadSection,
    BiquadState,
    FilterCascade,
    biquad_step,
    cascade_process,
    identity_section,
    paper_cascade,
    stability_check,
)
from .design import design_butterworth_bandpass
from .kernels import BACKEND
from .response import FrequencyResponse, freq_response, hz_to_omega, impulse_response, uniform_grid

__all__ = [
    "BACKEND",
    "BiquadSection",
    "BiquadState",
    "FilterCascade",
    "FrequencyResponse",
    "biquad_step",
    "cascade_process",
    "design_butterworth_bandpass",
    "freq_response",
    "hz_to_omega",
    "identity_section",
    "impulse_response",
    "paper_cascade",
    "stability_check",
    "uniform_grid",
]
