import io

import numpy as np
import pytest

from eogpipe.dsp import (
    BiquadSection,
    FilterCascade,
    freq_response,
    identity_section,
    impulse_response,
    paper_cascade,
    uniform_grid,
)
from eogpipe.dsp.response import write_response_csv
from eogpipe.errors import DomainError


def steady_state_gain(cascade, omega, n=20000, tail=4000):
    """Amplitude ratio from a least-squares sinusoid fit to the settled output."""
    k = np.arange(n)
    y = cascade.process(np.cos(omega * k))
    kk = k[-tail:]
    basis = np.column_stack([np.cos(omega * kk), np.sin(omega * kk)])
    coef, *_ = np.linalg.lstsq(basis, y[-tail:], rcond=None)
    return float(np.hypot(*coef))


def test_zeros_at_band_ends():
    r = freq_response(paper_cascade(), [0.0, np.pi])
    assert np.all(r.magnitude < 1e-9)


def test_single_section_dc_gain():
    s1 = paper_cascade().sections[0]
    expected = (0.09797471 + 0.19594942 + 0.09797471) / (1 + 0.02977423 + 0.04296318)
    got = freq_response(FilterCascade([s1]), [0.0]).magnitude[0]
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx(0.365326, abs=1e-6)


def test_product_of_sections():
    c = paper_cascade()
    w = uniform_grid(64)
    total = freq_response(c, w).response
    product = np.prod([freq_response(FilterCascade([s]), w).response for s in c.sections], axis=0)
    np.testing.assert_allclose(total, product, rtol=1e-12, atol=1e-15)


def test_derived_fields():
    r = freq_response(paper_cascade(), np.linspace(0.05, 3.0, 50))
    assert len(r.magnitude_db) == len(r.phase_rad) == len(r)
    np.testing.assert_allclose(r.magnitude_db, 20 * np.log10(np.abs(r.response)), rtol=1e-12)
    assert np.all(np.abs(r.phase_rad) <= np.pi)


@pytest.mark.parametrize("omega", [-0.1, np.pi + 1e-6, np.nan])
def test_domain_error(omega):
    with pytest.raises(DomainError):
        freq_response(paper_cascade(), [omega])


@pytest.mark.parametrize("omega", [0.05 * np.pi, 0.1 * np.pi, 0.25 * np.pi, 0.5 * np.pi, 0.65 * np.pi])
def test_analytic_matches_simulated(omega):
    analytic = freq_response(paper_cascade(), [omega]).magnitude[0]
    assert steady_state_gain(paper_cascade(), omega) == pytest.approx(analytic, abs=1e-3)


def test_impulse_identity():
    np.testing.assert_array_equal(impulse_response(FilterCascade([identity_section()]), 3), [1.0, 0.0, 0.0])


def test_impulse_first_sample_is_b0():
    s2 = paper_cascade().sections[1]
    np.testing.assert_array_equal(impulse_response(FilterCascade([s2]), 1), [1.0])


def test_impulse_sum_is_dc_gain():
    h = impulse_response(paper_cascade(), 4096)
    assert abs(h.sum()) < 1e-6


def test_impulse_leaves_stream_state_alone(rng):
    c = paper_cascade()
    c.process(rng.normal(size=40))
    before = c.state("h")
    impulse_response(c, 100)
    assert c.state("h") == before


def test_impulse_needs_length():
    with pytest.raises(DomainError):
        impulse_response(paper_cascade(), 0)


def test_csv_export():
    buf = io.StringIO()
    write_response_csv(freq_response(paper_cascade(), uniform_grid(4)), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "omega_rad,magnitude_db,phase_rad"
    assert len(lines) == 5
    omegas = [float(line.split(",")[0]) for line in lines[1:]]
    np.testing.assert_allclose(omegas, [0, np.pi / 3, 2 * np.pi / 3, np.pi], rtol=1e-8)
    assert lines[1].split(",")[1] == "-inf" and lines[4].split(",")[1] == "-inf"
    assert lines[2].split(",")[0] == "1.04719755"
