import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqnc_budget.model import HBAR, VACUUM_PSD, susceptibilities
from cqnc_budget.presets import fig2, fig4
from cqnc_budget.spectra import (MismatchSpec, NoTransductionError, SpectrumOptions,
                                 lambda_plus_sq_imag, mismatch_residual, s_f_added, s_f_cqnc,
                                 s_f_full, s_f_mismatch, s_f_standard, s_f_standard_printed,
                                 sql_reference)

# 40-digit mpmath solves of (i w I - A) H = B, independent of the package
GOLDEN_FULL = {
    # (opa gain / kappa, G_cs from g?, gamma_qe / gamma_m, w / Omega): value
    (0.1, True, 1.0, 0.5): 0.65872259140070690697,
    (0.1, True, 1.0, 1.0): 1.1628927134120497744,
    (0.0, False, 1.0, 0.5): 172158169.02016275504,
    (0.3, False, 1.0, 0.5): 1443480031.8785289889,
    (0.1, True, 1.3, 0.5): 1.0130247279016057121,
}


@pytest.mark.parametrize("key", list(GOLDEN_FULL))
def test_full_model_golden(key):
    gain, coupled, dq, f = key
    p = fig2()
    q = p.replace(opa_gain=gain * p.kappa, g_cs=p.g if coupled else 0.0, gamma_qe=dq * p.gamma_m)
    value = float(s_f_full(f * p.omega_m, q, p.g))
    assert value == pytest.approx(GOLDEN_FULL[key], rel=1e-8)
    if not coupled:
        assert float(s_f_standard(f * p.omega_m, q, p.g)) == pytest.approx(GOLDEN_FULL[key], rel=1e-8)


def test_cqnc_floor_formula():
    p = fig2()
    W, gq = p.omega_m, p.gamma_qe
    assert float(s_f_cqnc(W, p)) == pytest.approx(1 + gq**2 / (8 * W**2), rel=1e-15)
    assert float(s_f_cqnc(0.5 * W, p)) == pytest.approx(0.625 + gq**2 / (8 * W**2), rel=1e-15)


def test_sql_is_one_on_resonance():
    for p in (fig2(), fig4()):
        assert float(sql_reference(p.omega_m, p).s_sql) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60)
@given(st.floats(0.05, 5.0), st.floats(-4.0, 4.0), st.floats(0.0, 0.24))
def test_standard_never_below_sql(f, log_g, gain):
    p = fig2().replace(g_cs=0.0, opa_gain=gain * fig2().kappa)
    w = f * p.omega_m
    ref = sql_reference(w, p)
    g = float(ref.g_sql) * 10.0**log_g
    assert float(s_f_standard(w, p, g)) >= float(ref.s_sql) * (1 - 1e-12)


@settings(max_examples=60)
@given(st.floats(0.05, 5.0), st.floats(0.0, 0.24))
def test_sql_reached_at_g_sql(f, gain):
    p = fig2().replace(g_cs=0.0, opa_gain=gain * fig2().kappa)
    w = f * p.omega_m
    ref = sql_reference(w, p)
    assert float(s_f_standard(w, p, float(ref.g_sql))) == pytest.approx(float(ref.s_sql), rel=1e-9)


def test_g_sql_bad_cavity_limit():
    p = fig2().replace(opa_gain=0.0)
    w = 1e-3 * p.kappa
    chi = abs(complex(susceptibilities(w, p).chi_m))
    ref = sql_reference(w, p)
    assert float(ref.g_sql) == pytest.approx(math.sqrt(p.kappa) / (2 * math.sqrt(chi)), rel=1e-5)


def test_standard_bad_cavity_limit():
    p = fig2().replace(opa_gain=0.0)
    w = 1e-4 * p.kappa
    g = p.g
    chi = abs(complex(susceptibilities(w, p).chi_m))
    limit = p.kappa / (8 * p.gamma_m * g**2 * chi**2) + 2 * g**2 / (p.kappa * p.gamma_m)
    assert float(s_f_standard(w, p, g)) == pytest.approx(limit, rel=1e-6)


def test_printed_standard_minimum_is_sqrt2_sql():
    p = fig2()
    w = p.omega_m
    chi = abs(complex(susceptibilities(w, p).chi_m))
    gs = np.logspace(2, 8, 6001)
    best = min(float(s_f_standard_printed(w, p, g)) for g in gs)
    assert best == pytest.approx(math.sqrt(2) / (p.gamma_m * chi), rel=1e-4)


@given(st.floats(0.05, 5.0))
def test_thermal_offset_is_nbar(f):
    p = fig2()
    w = f * p.omega_m
    off = s_f_full(w, p, p.g)
    on = s_f_full(w, p, p.g, SpectrumOptions(include_thermal=True))
    assert float(on - off) == pytest.approx(p.nbar, rel=1e-12)


def test_physical_normalization():
    p = fig2()
    w = 0.7 * p.omega_m
    dimless = s_f_added(w, p, p.g)
    phys = s_f_added(w, p, p.g, SpectrumOptions(normalization="physical"))
    assert float(phys) == pytest.approx(float(dimless) * HBAR * p.mass * p.omega_m * p.gamma_m,
                                        rel=1e-14)


def test_bad_normalization():
    with pytest.raises(ValueError):
        SpectrumOptions(normalization="si")


@pytest.mark.parametrize("fn", [s_f_added, s_f_standard, s_f_full, s_f_standard_printed])
def test_no_transduction(fn):
    with pytest.raises(NoTransductionError):
        fn(1e5, fig2(), 0.0)


@settings(max_examples=40)
@given(st.floats(0.01, 10.0), st.floats(0.0, 0.24), st.floats(-6.0, 2.0))
def test_spectra_positive_finite(f, gain, log_p):
    p = fig2().replace(opa_gain=gain * fig2().kappa, power=10.0**log_p)
    w = f * p.omega_m
    g = p.g
    for v in (s_f_cqnc(w, p), s_f_added(w, p, g), s_f_standard(w, p, g), s_f_full(w, p, g),
              s_f_mismatch(w, p, g, MismatchSpec.decay_rate(0.3)), sql_reference(w, p).s_sql):
        assert np.isfinite(v) and v > 0


def test_added_shot_term_is_half_weight():
    # ideal cancellation: added = 0.5 * (full-model shot term) + floor
    p = fig4().replace(opa_gain=0.0)
    w = 0.5 * p.omega_m
    s = susceptibilities(w, p)
    shot_full = VACUUM_PSD * abs(complex(s.lambda_minus * p.kappa - 1)) ** 2 / (
        abs(complex(s.lambda_minus)) ** 2 * 2 * p.gamma_m * p.kappa * p.g**2 * abs(complex(s.chi_m)) ** 2)
    assert float(s_f_added(w, p, p.g) - s_f_cqnc(w, p)) == pytest.approx(0.5 * shot_full, rel=1e-12)


def test_mismatch_spec_validation():
    with pytest.raises(ValueError):
        MismatchSpec("gain")
    with pytest.raises(ValueError):
        MismatchSpec.decay_rate(-1.0)
    with pytest.raises(ValueError):
        MismatchSpec.coupling(-2.0)
    assert MismatchSpec.coupling(0.01).value == 0.01


def test_epsilon_zero_has_no_residual():
    p = fig4()
    assert float(mismatch_residual(0.5 * p.omega_m, p, p.g, MismatchSpec.coupling(0.0))) == 0.0


def test_epsilon_residual_formula():
    p = fig4()
    w = 0.5 * p.omega_m
    lp = susceptibilities(w, p).lambda_plus
    eps = 0.01
    expected = abs(complex(lp)) ** 2 * p.kappa * p.g**2 / p.gamma_m * ((1 + eps) ** 2 - 1) ** 2
    assert float(mismatch_residual(w, p, p.g, MismatchSpec.coupling(eps))) == pytest.approx(expected, rel=1e-12)


def test_delta_residual_monotone():
    p = fig4()
    w = 0.5 * p.omega_m
    r = [float(mismatch_residual(w, p, p.g, MismatchSpec.decay_rate(d)))
         for d in np.linspace(0, 1, 101)]
    assert np.all(np.diff(r) >= 0)


def test_lambda_plus_sq_imag_bounds():
    p = fig2()
    v = lambda_plus_sq_imag(np.linspace(0.05, 5, 300) * p.omega_m, p)
    assert np.all((v >= 0) & (v <= 1 + 1e-15))
