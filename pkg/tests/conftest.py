import numpy as np
import pytest

from eogpipe.calibration import calibrate
from eogpipe.pipeline import FilterChoice, filter_session
from eogpipe.synth import synth_calibration_sweep


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def run_filter():
    return FilterChoice().build(250.0)


@pytest.fixture(scope="session")
def clean_sweep(run_filter):
    """Noise-free 3-repetition sweep after the default run filter."""
    return filter_session(synth_calibration_sweep(repetitions=3), run_filter)


@pytest.fixture(scope="session")
def clean_profile(clean_sweep):
    return calibrate(clean_sweep)


# -- acceptance summary -------------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" in report.nodeid and (report.when == "call" or report.failed):
        name = report.nodeid.split("::")[-1]
        if report.failed or name not in _acceptance:
            _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for label, fn in CRITERIA:
        outcome = _acceptance.get(fn.__name__)
        if outcome:
            terminalreporter.write_line(f"{outcome}  {label}")
