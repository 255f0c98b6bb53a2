"""Shared fixtures: the standard model zoo used across the test modules.

Coupling families with value-based equality (Lorentzian, threshold
power law) share their memoized spectral kernels across equal instances,
so fixtures exist mostly for readability.  The tabulated family hashes
by identity, so reusing one session instance avoids rebuilding its
kernel in every test.

Also hosts the terminal-summary hook that echoes the acceptance verdict
lines after the run (pytest's fd-level capture would otherwise swallow
them on success).
"""

import sys

import numpy as np
import pytest

from zenodecay.formfactor import (
    LorentzianCoupling,
    TabulatedCoupling,
    ThresholdPowerLawCoupling,
)

# The weak-coupling workhorse: lambda = 0.1, Lambda = 1.
LAM, BW = 0.1, 1.0


@pytest.fixture(scope="session")
def lor():
    return LorentzianCoupling(LAM, BW)


@pytest.fixture(scope="session")
def tpl():
    """Threshold family: ~sqrt rise at 0, ~omega^-3.5 falloff past 1."""
    return ThresholdPowerLawCoupling(LAM, BW, 0.0, 0.5, 4.0)


@pytest.fixture(scope="session")
def tpl_strong():
    """Coupling strong enough to split a bound state below threshold."""
    return ThresholdPowerLawCoupling(1.0, BW, 0.0, 0.5, 4.0)


@pytest.fixture(scope="session")
def tab_lorentzian():
    """Lorentzian sampled on a dense linear grid over [-100, 100]."""
    src = LorentzianCoupling(LAM, BW)
    om = np.linspace(-100.0, 100.0, 20001)
    return TabulatedCoupling(om, src.g2(om))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "VERDICTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
