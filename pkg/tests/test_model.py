import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqnc_budget.model import (TWO_PI, DivergenceError, ParameterError, SystemParams,
                               UnsupportedError, coupling_from_power, cqnc_residual,
                               exact_cqnc_match, power_from_coupling, susceptibilities,
                               thermal_occupation)
from cqnc_budget.presets import fig2, fig4, get_preset, table1

# golden values from a 40-digit mpmath evaluation of the defining formulas
FIG2_G = 333351615.60768071763
FIG2_NBAR = 20836619.136094569407
TABLE1_POWER = 2.3460916194545927092e-12
FIG2_CHI_M_HALF_TIMES_GAMMA = 0.00013333333274074074337 - 8.888888849382716225e-9j


def test_fig2_coupling_golden(p_fig2):
    assert p_fig2.g == pytest.approx(FIG2_G, rel=1e-12)
    assert p_fig2.g / TWO_PI == pytest.approx(53054557.41163179, rel=1e-12)


def test_fig2_nbar_golden(p_fig2):
    assert p_fig2.nbar == pytest.approx(FIG2_NBAR, rel=1e-12)


def test_table1_power_golden(p_table1):
    assert p_table1.power == pytest.approx(TABLE1_POWER, rel=1e-12)
    assert p_table1.g == pytest.approx(p_table1.g_cs, rel=1e-12)


def test_chi_m_golden(p_fig2):
    chi = susceptibilities(0.5 * p_fig2.omega_m, p_fig2).chi_m
    assert chi * p_fig2.gamma_m == pytest.approx(FIG2_CHI_M_HALF_TIMES_GAMMA, rel=1e-12)


def test_table1_values():
    p = table1()
    assert p.kappa == pytest.approx(TWO_PI * 1e6)
    assert p.omega_m == pytest.approx(TWO_PI * 10e6)
    assert p.gamma_m == pytest.approx(TWO_PI * 100)
    assert p.gamma_qe == pytest.approx(TWO_PI * 200)
    assert p.opa_gain == pytest.approx(0.3 * p.kappa)
    assert p.omega_l == pytest.approx(TWO_PI * 299792458 / 1064e-9)
    assert p.temperature == 300


def test_fig4_is_matched():
    p = fig4()
    assert p.gamma_qe == p.gamma_m
    assert p.delta_qe == p.omega_m
    assert p.g == pytest.approx(p.g_cs, rel=1e-12)


def test_get_preset_unknown():
    with pytest.raises(KeyError, match="unknown preset"):
        get_preset("nope")


@pytest.mark.parametrize("field,value", [("gamma_m", -5.0), ("kappa", 0.0), ("mass", -1.0),
                                         ("omega_m", float("nan")), ("g_cs", -1.0),
                                         ("opa_gain", -0.1), ("power", float("inf"))])
def test_invalid_parameters(field, value):
    with pytest.raises(ParameterError, match=field):
        fig2().replace(**{field: value})


def test_opa_phase_unsupported():
    with pytest.raises(UnsupportedError):
        fig2().replace(opa_phase=0.5)


def test_from_hz_needs_one_laser_spec():
    kw = dict(kappa=1e6, omega_m=1e5, gamma_m=1.0, gamma_qe=1.0, g0=1.0, g_cs=1.0,
              opa_gain_over_kappa=0.0, power=1e-3, temperature=1.0, mass=1.0)
    with pytest.raises(ParameterError):
        SystemParams.from_hz(**kw)
    with pytest.raises(ParameterError):
        SystemParams.from_hz(wavelength=1e-6, laser_frequency=3e14, **kw)
    p = SystemParams.from_hz(wavelength=1e-6, **kw)
    assert p.delta_qe == p.omega_m


def test_thermal_occupation_invalid():
    with pytest.raises(ParameterError):
        thermal_occupation(-1.0, 1.0)
    assert thermal_occupation(0.0, 1.0) == 0.0


@given(st.floats(1e-18, 10.0))
def test_power_coupling_inverse(power):
    p = fig2()
    g = coupling_from_power(power, p).g
    assert power_from_coupling(g, p) == pytest.approx(power, rel=1e-12)


@given(st.floats(1e-18, 1.0), st.floats(1.0001, 100.0))
def test_coupling_monotone(power, factor):
    p = fig2()
    assert coupling_from_power(power * factor, p).g > coupling_from_power(power, p).g


def test_coupling_rejects_negative_power():
    with pytest.raises(ParameterError):
        coupling_from_power(-1.0, fig2())


@settings(max_examples=50)
@given(st.floats(1e2, 1e8), st.floats(0.0, 0.24))
def test_conjugation_symmetry(w, gain):
    p = fig2().replace(opa_gain=gain * fig2().kappa)
    a = susceptibilities(w, p)
    b = susceptibilities(-w, p)
    for name in ("chi_m", "chi_a", "chi_s", "xi", "chi_s_prime", "lambda_plus", "lambda_minus"):
        assert getattr(b, name) == pytest.approx(np.conj(getattr(a, name)), rel=1e-12)


@pytest.mark.parametrize("q", [2.0, 5.0, 20.0])
def test_chi_m_peak_position(q):
    # |chi_m| peaks at w^2 = Omega^2 - gamma^2/2
    p = fig2().replace(gamma_m=fig2().omega_m / q)
    W, gm = p.omega_m, p.gamma_m
    w = np.linspace(0.5 * W, 1.2 * W, 200001)
    found = w[np.argmax(np.abs(susceptibilities(w, p).chi_m))]
    assert found == pytest.approx(math.sqrt(W**2 - gm**2 / 2), abs=2 * (w[1] - w[0]))


@given(st.floats(1e2, 1e7))
def test_chi_s_prime_closed_fraction(w):
    p = fig2().replace(gamma_qe=TWO_PI * 70, delta_qe=TWO_PI * 2.9e5)
    D, gq = p.delta_qe, p.gamma_qe
    expected = -D / (D**2 - w**2 + 1j * w * gq + gq**2 / 4)
    assert susceptibilities(w, p).chi_s_prime == pytest.approx(expected, rel=1e-10)


def test_lambda_plus_diverges_at_threshold():
    p = fig2()
    p = p.replace(opa_gain=p.kappa / 4)
    with pytest.raises(DivergenceError) as info:
        susceptibilities(np.array([0.0, 1.0]), p)
    assert info.value.response == "lambda_plus"
    assert info.value.omega == 0.0


def test_susceptibilities_reject_nan():
    with pytest.raises(ValueError):
        susceptibilities(np.array([1.0, np.nan]), fig2())


def test_literal_match_residual(p_fig2):
    # with Delta = Omega and gamma_qE = gamma_m the residual is g^2 chi_m (gamma^2/4) / D(w)
    p = p_fig2
    w = np.linspace(0.5, 1.5, 101) * p.omega_m
    gm = p.gamma_m
    rel = np.abs(cqnc_residual(w, p, p.g)) / np.abs(p.g**2 * susceptibilities(w, p).chi_m)
    expected = (gm**2 / 4) / np.abs(p.omega_m**2 - w**2 + 1j * w * gm + gm**2 / 4)
    np.testing.assert_allclose(rel, expected, rtol=1e-6)
    at_res = float(np.abs(cqnc_residual(p.omega_m, p, p.g)) /
                   np.abs(p.g**2 * susceptibilities(p.omega_m, p).chi_m))
    assert at_res == pytest.approx(gm / (4 * p.omega_m), rel=1e-6)


@pytest.mark.parametrize("name", ["table1", "fig2", "fig4"])
def test_exact_match_cancels(name):
    p = exact_cqnc_match(get_preset(name))
    w = np.linspace(0.05, 5, 997) * p.omega_m
    rel = np.abs(cqnc_residual(w, p, p.g)) / np.abs(p.g**2 * susceptibilities(w, p).chi_m)
    assert rel.max() < 1e-9


def test_exact_match_overdamped():
    p = fig2()
    with pytest.raises(ParameterError):
        exact_cqnc_match(p.replace(gamma_m=3 * p.omega_m))
