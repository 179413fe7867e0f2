import numpy as np
import pytest

from eitfwm import TWO_PI, DriveParams, derive_params
from eitfwm.runner import vapor_cell_medium

SQRT05 = float(np.sqrt(0.05))


def setup(two_d, rabi_hz, delta_hz=0.0, f=1.0, **medium_kw):
    medium = vapor_cell_medium(two_d)
    if medium_kw:
        from dataclasses import replace

        medium = replace(medium, **medium_kw)
    drive = DriveParams(TWO_PI * rabi_hz, TWO_PI * delta_hz, f)
    return medium, drive, derive_params(medium, drive)


@pytest.fixture
def fig4_setup():
    return setup(110, 14e6)


@pytest.fixture
def fig2_setup():
    return setup(98, 9e6)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
