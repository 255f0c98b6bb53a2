"""Self-energy: closed forms, quadrature routes, sheets, cut values."""

import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from zenodecay.errors import ContinuationUnsupportedError, DomainError
from zenodecay.formfactor import LorentzianCoupling, ThresholdPowerLawCoupling
from zenodecay.selfenergy import Sheet, real_shift, self_energy


def _quad_sigma(ff, E):
    """Independent route: adaptive quadrature of g2(w)/(E-w) on the line."""
    re, _ = integrate.quad(
        lambda w: (float(ff.g2(w)) * (E - w).conjugate()).real / abs(E - w) ** 2,
        -np.inf, np.inf, epsabs=1e-12, epsrel=1e-10, limit=400,
    )
    im, _ = integrate.quad(
        lambda w: (float(ff.g2(w)) * (E - w).conjugate()).imag / abs(E - w) ** 2,
        -np.inf, np.inf, epsabs=1e-12, epsrel=1e-10, limit=400,
    )
    return complex(re, im)


# -- Lorentzian closed form -------------------------------------------


def test_lorentzian_value_purely_imaginary_on_axis(lor):
    # lambda^2/(E + i*Lambda) at E = i is 0.01/(2i) = -0.005i.
    sv = self_energy(lor, 1j)
    assert sv.value == pytest.approx(-0.005j, abs=1e-15)
    assert sv.sheet is Sheet.FIRST


def test_lorentzian_value_rational_point(lor):
    # 0.01/(1 + 3i) = 0.001 - 0.003i by exact rational arithmetic.
    sv = self_energy(lor, 1.0 + 2.0j)
    assert sv.value == pytest.approx(0.001 - 0.003j, abs=1e-16)
    assert sv.derivative == pytest.approx(-0.01 / (1.0 + 3.0j) ** 2, rel=1e-14)


def test_zero_coupling_gives_zero():
    ff = LorentzianCoupling(0.0, 1.0)
    for sheet in (Sheet.FIRST, Sheet.SECOND):
        sv = self_energy(ff, 0.3 - 0.2j, sheet)
        assert sv.value == 0.0 and sv.derivative == 0.0


def test_lorentzian_matches_direct_quadrature(lor):
    for E in (0.5 + 1.0j, -2.0 + 0.25j, 3.0 + 4.0j):
        assert self_energy(lor, E).value == pytest.approx(_quad_sigma(lor, E), abs=1e-8)


# -- general-family quadrature route ----------------------------------


def test_tpl_matches_direct_quadrature(tpl):
    for E in (0.5 + 1.0j, 2.0 + 0.3j, -1.0 + 0.5j):
        assert self_energy(tpl, E).value == pytest.approx(_quad_sigma(tpl, E), abs=1e-8)


def test_herglotz_negative_imaginary_part(lor, tpl):
    rng = np.random.default_rng(11)
    for _ in range(20):
        E = complex(rng.uniform(-5, 5), rng.uniform(0.05, 5))
        for ff in (lor, tpl):
            assert self_energy(ff, E).value.imag < 0.0


def test_derivative_matches_central_differences(lor, tpl):
    cases = [
        (lor, 0.8 + 0.6j, Sheet.FIRST),
        (tpl, 0.8 + 0.5j, Sheet.FIRST),
        (tpl, 1.5 - 0.4j, Sheet.SECOND),
    ]
    for ff, E, sheet in cases:
        h = 1e-5 * max(1.0, abs(E))
        fd = (
            self_energy(ff, E + h, sheet).value - self_energy(ff, E - h, sheet).value
        ) / (2.0 * h)
        assert self_energy(ff, E, sheet).derivative == pytest.approx(fd, rel=1e-6)


def test_coupling_scaling_is_quadratic(tpl):
    # Sigma depends on the coupling only through g2 ~ lambda^2.
    tripled = tpl.scaled(3.0)
    for E in (0.4 + 0.2j, 2.0 - 0.5j):
        base = self_energy(tpl, E).value
        assert self_energy(tripled, E).value == pytest.approx(9.0 * base, rel=1e-12)


# -- cut values and sheet relations -----------------------------------


def test_real_shift_lorentzian_boundary_values(lor):
    assert real_shift(lor, 0.0) == 0.0
    assert real_shift(lor, 1.0) == pytest.approx(0.005, rel=1e-12)
    assert real_shift(LorentzianCoupling(0.0, 1.0), 0.3) == 0.0


def test_boundary_consistency_from_above(tpl):
    # Sigma_I(w + i*eps) approaches Delta_R(w) - i*pi*g2(w).
    w, eps = 0.8, 1e-6
    above = self_energy(tpl, complex(w, eps)).value
    limit = complex(real_shift(tpl, w), -math.pi * float(tpl.g2(w)))
    assert above == pytest.approx(limit, abs=1e-5)


def test_second_sheet_continues_first_through_cut(tpl):
    # Continuation correctness, reading one: crossing the cut is smooth.
    w, eps = 0.8, 1e-6
    above = self_energy(tpl, complex(w, eps), Sheet.FIRST).value
    below = self_energy(tpl, complex(w, -eps), Sheet.SECOND).value
    assert above == pytest.approx(below, abs=1e-5)


def test_two_sheet_gap_is_continued_density(tpl):
    # Reading two: at the same point below the axis the sheets differ by
    # exactly the continuation term 2*pi*i*g2.
    w, eps = 0.8, 1e-6
    first = self_energy(tpl, complex(w, -eps), Sheet.FIRST).value
    second = self_energy(tpl, complex(w, -eps), Sheet.SECOND).value
    assert first - second == pytest.approx(2j * math.pi * float(tpl.g2(w)), abs=1e-5)


def test_second_sheet_on_cut_equals_boundary_value(tpl):
    # The +0j convention evaluates the limit from above exactly.
    w = 1.2
    sv = self_energy(tpl, complex(w, 0.0), Sheet.SECOND)
    expected = complex(real_shift(tpl, w), -math.pi * float(tpl.g2(w)))
    assert sv.value == pytest.approx(expected, rel=1e-10)


def test_first_sheet_on_cut_rejected(lor, tpl):
    for ff in (lor, tpl):
        with pytest.raises(DomainError):
            self_energy(ff, complex(0.5, 0.0), Sheet.FIRST)


def test_continuation_capability_errors(tab_lorentzian):
    with pytest.raises(ContinuationUnsupportedError):
        self_energy(tab_lorentzian, 1.0 - 0.1j, Sheet.SECOND)
    odd_exponent = ThresholdPowerLawCoupling(0.1, 1.0, 0.0, 0.7, 4.0)
    assert not odd_exponent.continuable
    with pytest.raises(ContinuationUnsupportedError):
        self_energy(odd_exponent, 1.0 - 0.1j, Sheet.SECOND)


# -- tabulated family --------------------------------------------------


def test_tabulated_tracks_lorentzian_off_cut(lor, tab_lorentzian):
    # Truncation of the tails at |w| = 100 bounds the agreement.
    for E in (0.5 + 1.0j, 2.0 + 0.3j, 1.0 - 2.0j):
        a = self_energy(tab_lorentzian, E).value
        b = self_energy(lor, E).value
        assert a == pytest.approx(b, abs=1e-6)


def test_tabulated_real_shift_tracks_lorentzian(lor, tab_lorentzian):
    for w in (1.0, 2.0039, -0.5):
        assert real_shift(tab_lorentzian, w) == pytest.approx(
            real_shift(lor, w), abs=1e-6
        )


def test_tabulated_real_shift_finite_at_knot(tab_lorentzian):
    # Hitting a table knot exactly must not trip on the segment logs.
    knot = float(tab_lorentzian.omegas[10_000])
    assert math.isfinite(real_shift(tab_lorentzian, knot))


def test_tabulated_derivative_matches_finite_differences(tab_lorentzian):
    E = 1.5 + 0.8j
    h = 1e-5 * max(1.0, abs(E))
    fd = (
        self_energy(tab_lorentzian, E + h).value
        - self_energy(tab_lorentzian, E - h).value
    ) / (2.0 * h)
    assert self_energy(tab_lorentzian, E).derivative == pytest.approx(fd, rel=1e-6)


def test_tabulated_shift_diverges_at_nonzero_edge():
    # A table that ends mid-density has a genuine log divergence there.
    from zenodecay.formfactor import TabulatedCoupling

    ff = TabulatedCoupling([0.0, 1.0, 2.0], [0.5, 1.0, 0.5])
    with pytest.raises(DomainError):
        real_shift(ff, 2.0)
