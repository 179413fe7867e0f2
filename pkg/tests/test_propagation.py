"""Closed-form propagation checked against expm, RK4 and limiting cases."""

from dataclasses import replace

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from eitfwm import (
    TWO_PI,
    DomainError,
    DriveParams,
    PropagationOverflow,
    derive_params,
    ode_oracle,
    propagate_analytic,
    propagate_approx,
    response_at,
    transfer_matrix,
)
from eitfwm.propagation import approx_validity, oracle_relative_error, seeded_input

from conftest import SQRT05, setup

SETS = [(52, 9e6), (110, 14e6)]
DELTAS = TWO_PI * np.linspace(-600e3, 600e3, 7)
OMEGAS = TWO_PI * np.linspace(-200e3, 200e3, 5)


def _coefficient_matrix(medium, drive, der, delta, w):
    """The 2x2 system matrix written out from the raw parameters."""
    om2 = drive.omega**2
    spin = delta - der.delta_s + w
    opt = delta - 2 * der.delta_s + w
    F = om2 + (medium.gamma - 1j * opt) * (der.gamma_0 - 1j * spin)
    pref = 1j * medium.d * medium.gamma / (F * medium.length)
    raman = -om2 / medium.delta_hf
    return pref * np.array([[spin + 1j * der.gamma_0, raman], [-raman, 0.0]])


def _mesh():
    return np.meshgrid(DELTAS, OMEGAS, indexing="ij")


@pytest.mark.parametrize("two_d, rabi", SETS)
def test_zero_length_is_identity(two_d, rabi):
    medium, drive, der = setup(two_d, rabi)
    D, W = _mesh()
    t = transfer_matrix(medium, drive, der, 0.0, W, delta=D)
    np.testing.assert_array_equal(t.as_array(), np.broadcast_to(np.eye(2), D.shape + (2, 2)))


@pytest.mark.parametrize("z_frac", [0.3, 1.0])
@pytest.mark.parametrize("two_d, rabi", SETS)
def test_matches_matrix_exponential(two_d, rabi, z_frac):
    medium, drive, der = setup(two_d, rabi)
    z = z_frac * medium.length
    D, W = _mesh()
    got = transfer_matrix(medium, drive, der, z, W, delta=D).as_array()
    for idx in np.ndindex(D.shape):
        want = scipy.linalg.expm(_coefficient_matrix(medium, drive, der, D[idx], W[idx]) * z)
        assert np.linalg.norm(got[idx] - want) <= 1e-12 * np.linalg.norm(want)


@pytest.mark.parametrize("f", [0.0, SQRT05, 1.0])
@pytest.mark.parametrize("two_d, rabi", SETS)
def test_closed_form_matches_matrix_column(two_d, rabi, f):
    medium, drive, der = setup(two_d, rabi, f=f)
    D, W = _mesh()
    e0 = 0.7 - 0.2j
    t = transfer_matrix(medium, drive, der, medium.length, W, delta=D)
    via_matrix = t.apply(e0, -f * e0)
    direct = propagate_analytic(medium, drive, der, e0, None, W, delta=D)
    assert np.all(oracle_relative_error(via_matrix, direct) <= 1e-12)


def test_rk4_at_headline_parameters():
    medium, drive, der = setup(110, 14e6)
    analytic = propagate_analytic(medium, drive, der)
    oracle = ode_oracle(medium, drive, der, seeded_input(1.0, 1.0), steps=10_000)
    assert oracle_relative_error(analytic, oracle) < 1e-8


@pytest.mark.parametrize("f", [0.0, SQRT05, 1.0])
def test_rk4_on_grid(f):
    medium, drive, der = setup(52, 9e6, f=f)
    D, W = _mesh()
    analytic = propagate_analytic(medium, drive, der, 1.0, None, W, delta=D)
    oracle = ode_oracle(medium, drive, der, seeded_input(1.0, f), W, 10_000, delta=D)
    assert oracle_relative_error(analytic, oracle).max() < 1e-8


def test_rk4_fourth_order_convergence():
    medium, drive, der = setup(110, 14e6, 300e3)
    w = TWO_PI * 150e3
    exact = propagate_analytic(medium, drive, der, 1.0, None, w)
    errs = [
        oracle_relative_error(exact, ode_oracle(medium, drive, der, seeded_input(1.0, 1.0), w, n))
        for n in (1000, 2000)
    ]
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.1)


def test_rk4_empty_medium_is_identity():
    medium, drive, der = setup(1e-14, 9e6)
    init = seeded_input(0.3 + 0.4j, SQRT05)
    out = ode_oracle(medium, drive, der, init, TWO_PI * 10e3, 1000)
    assert abs(out.signal - init.signal) < 1e-12
    assert abs(out.stokes_conj - init.stokes_conj) < 1e-12


def test_rk4_rejects_coarse_steps():
    medium, drive, der = setup(52, 9e6)
    with pytest.raises(DomainError):
        ode_oracle(medium, drive, der, seeded_input(1.0, 1.0), steps=999)


def test_spectrum_point_at_light_shifted_resonance():
    medium, drive, der = setup(52, 9e6)
    analytic = propagate_analytic(medium, drive, der, 1.0, delta=der.delta_s)
    oracle = ode_oracle(medium, drive, der, seeded_input(1.0, 1.0), delta=der.delta_s)
    assert abs(analytic.signal) == pytest.approx(abs(oracle.signal), rel=1e-9)


@pytest.mark.parametrize("two_d, rabi", SETS)
def test_determinant_law(two_d, rabi):
    medium, drive, der = setup(two_d, rabi)
    D, W = _mesh()
    t = transfer_matrix(medium, drive, der, medium.length, W, delta=D)
    sigma = response_at(medium, drive, der, W, delta=D).sigma
    expected = np.exp(2j * sigma * medium.length)
    assert np.max(np.abs(t.det() - expected) / np.abs(expected)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(
    st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
    st.floats(-TWO_PI * 600e3, TWO_PI * 600e3),
    st.sampled_from([0.0, SQRT05, 1.0]),
)
def test_linear_in_input_amplitude(c, delta, f):
    medium, drive, der = setup(110, 14e6, f=f)
    unit = propagate_analytic(medium, drive, der, 1.0, delta=delta)
    scaled = propagate_analytic(medium, drive, der, c, delta=delta)
    tol = 4e-16 * abs(c) * (abs(unit.signal) + abs(unit.stokes_conj)) + 1e-300
    assert abs(scaled.signal - c * unit.signal) <= tol
    assert abs(scaled.stokes_conj - c * unit.stokes_conj) <= tol


@pytest.mark.parametrize("two_d, rabi", SETS)
def test_branch_invariance(two_d, rabi):
    medium, drive, der = setup(two_d, rabi, f=SQRT05)
    D, W = _mesh()
    a = propagate_analytic(medium, drive, der, 1.0, None, W, branch=1, delta=D)
    b = propagate_analytic(medium, drive, der, 1.0, None, W, branch=-1, delta=D)
    assert np.max(oracle_relative_error(a, b)) <= 1e-12


@pytest.mark.parametrize("delta_hz", [-300e3, -40e3, 0.0, 86e3, 250e3])
def test_unseeded_stokes_from_mixing_alone(delta_hz):
    medium, drive, der = setup(110, 14e6, delta_hz, f=0.0)
    r = response_at(medium, drive, der, 0.0)
    L = medium.length
    expected = abs(1j * (2 * der.delta_r / r.beta) * np.sinh(r.xi * L) * np.exp(1j * r.sigma * L))
    out = propagate_analytic(medium, drive, der, 1.0)
    assert abs(out.stokes_conj) == pytest.approx(expected, rel=1e-12)
    t21 = transfer_matrix(medium, drive, der, L).t21
    assert out.stokes_conj == pytest.approx(t21, rel=1e-14)


@pytest.mark.parametrize("f", [0.0, SQRT05, 1.0])
def test_decoupled_limit(f):
    medium, drive, _ = setup(110, 14e6, f=f)
    medium = replace(medium, delta_hf=medium.delta_hf * 1e6)
    der = derive_params(medium, drive)
    W = TWO_PI * np.linspace(-200e3, 200e3, 9)
    D = TWO_PI * 40e3
    out = propagate_analytic(medium, drive, der, 1.0, None, W, delta=D)
    F = response_at(medium, drive, der, W, delta=D).f_denom
    eit = np.exp(1j * medium.d * medium.gamma / F * (D - der.delta_s + W + 1j * der.gamma_0))
    np.testing.assert_allclose(out.signal, eit, rtol=1e-5)
    np.testing.assert_allclose(out.stokes_conj, -f, atol=2e-6)


def test_small_xi_series_is_continuous():
    medium, drive, der = setup(52, 9e6, gamma_sg=0.0, delta_hf=TWO_PI * 6.835e21)
    resp = response_at(medium, drive, der, 0.0, delta=der.delta_s)
    assert abs(resp.xi * medium.length) < 1e-6
    out = propagate_analytic(medium, drive, der, 1.0, delta=der.delta_s)
    assert out.signal == pytest.approx(1.0, abs=1e-9)


def test_overflow_is_reported():
    medium, drive, der = setup(1e6, 1e5)
    with pytest.raises(PropagationOverflow) as info:
        propagate_analytic(medium, drive, der, 1.0, None, TWO_PI * np.array([0.0, 1e3]))
    assert info.value.exponent > 700


def test_z_outside_cell():
    medium, drive, der = setup(52, 9e6)
    with pytest.raises(DomainError):
        transfer_matrix(medium, drive, der, 2 * medium.length)


class TestApproximation:
    def test_pole_at_light_shifted_resonance(self):
        medium, drive, der = setup(98, 9e6)
        with pytest.raises(DomainError):
            propagate_approx(medium, drive, der, 1.0, np.array([0.0, 1e4]))

    def test_unseeded_stokes_substitution(self):
        medium, drive, der = setup(98, 9e6, f=0.0)
        dt = TWO_PI * np.linspace(50e3, 400e3, 8)
        fields, _ = propagate_approx(medium, drive, der, 1.0, dt)
        two_i_sigma_l = 1j * dt * medium.d * medium.gamma / drive.omega**2 - (
            dt**2 * medium.d * medium.gamma**2 / drive.omega**4
        )
        expected = np.abs(drive.omega**2 / (medium.delta_hf * dt)) * np.abs(1 - np.exp(two_i_sigma_l))
        np.testing.assert_allclose(fields.stokes_amp, expected, rtol=1e-14)

    @pytest.mark.parametrize("f", [0.0, SQRT05, 1.0])
    @pytest.mark.parametrize("two_d, rabi", [(52, 9e6), (98, 9e6), (110, 14e6)])
    def test_agrees_inside_validity_window(self, two_d, rabi, f):
        medium, drive, der = setup(two_d, rabi, f=f)
        dt = TWO_PI * np.linspace(-600e3, 600e3, 2401)
        dt = dt[dt != 0]
        approx, validity = propagate_approx(medium, drive, der, 1.0, dt)
        exact = propagate_analytic(medium, drive, der, 1.0, delta=dt + der.delta_s)
        inside = validity.valid
        assert inside.sum() > 50
        # measured against the unit input amplitude; relative-to-output blows up at the dips
        for a, b in ((approx.signal, exact.signal), (approx.stokes_conj, exact.stokes_conj)):
            assert np.max(np.abs(np.abs(a[inside]) - np.abs(b[inside]))) < 0.15

    def test_validity_ratios(self):
        medium, drive, der = setup(110, 14e6)
        v = approx_validity(drive, der, TWO_PI * np.array([1e3, 300e3, 50e6]))
        assert v.valid.tolist() == [False, True, False]
        assert v.over_raman[1] == pytest.approx(300e3 / (2 * 28.68e3), rel=1e-3)

    # at 14 MHz the window only opens above n = 2.2
    @pytest.mark.parametrize("two_d, rabi", [(52, 9e6), (98, 9e6)])
    def test_even_order_is_a_dip(self, two_d, rabi):
        medium, drive, der = setup(two_d, rabi, f=1.0)
        unit = np.pi * der.vg_over_l
        x = np.linspace(1.5, 2.5, 401) * unit
        fields, validity = propagate_approx(medium, drive, der, 1.0, x)
        assert validity.valid[200]
        i = int(np.argmin(np.abs(fields.signal)))
        assert 0 < i < len(x) - 1
        assert abs(x[i] / unit - 2.0) < 0.25


@pytest.mark.parametrize("two_d, rabi", [(52, 9e6), (110, 14e6)])
def test_decoupled_limit_converges_as_inverse_splitting(two_d, rabi):
    medium, drive, _ = setup(two_d, rabi, f=1.0)
    D, W = np.meshgrid(DELTAS, OMEGAS, indexing="ij")
    residuals = []
    for scale in (1e5, 1e6):
        m = replace(medium, delta_hf=medium.delta_hf * scale)
        der = derive_params(m, drive)
        out = propagate_analytic(m, drive, der, 1.0, None, W, delta=D)
        residuals.append(np.max(np.abs(np.abs(out.stokes_conj) - 1.0)))
    assert residuals[0] / residuals[1] == pytest.approx(10.0, rel=0.01)
    # leading residual is the mixing strength d*gamma/Delta_hf
    assert residuals[1] <= medium.d * medium.gamma / (medium.delta_hf * 1e6)
