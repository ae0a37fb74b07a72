import json

import numpy as np
import pytest

from cqnc_budget.model import exact_cqnc_match
from cqnc_budget.oracle import build_linear_model, oracle_added_spectrum
from cqnc_budget.presets import fig2, fig4, table1
from cqnc_budget.spectra import s_f_standard
from cqnc_budget.validate import run_validate, validation_grid


def test_grid():
    p = fig2()
    w = validation_grid(p)
    assert len(w) == 1000
    assert w[0] == pytest.approx(0.05 * p.omega_m) and w[-1] == pytest.approx(5 * p.omega_m)


def test_table1_unstable():
    rep = run_validate(table1())
    assert rep.stability["stable"] is False
    assert rep.stability["max_real_eigenvalue"] == pytest.approx(0.1 * table1().kappa, rel=1e-9)
    assert rep.check("stability_eigenvalue").passed


def test_standard_cavity_equals_oracle():
    p = fig2().replace(g_cs=0.0, opa_gain=0.0)
    w = validation_grid(p)
    ref = oracle_added_spectrum(build_linear_model(p, p.g), w)
    assert np.max(np.abs(s_f_standard(w, p, p.g) - ref) / ref) < 1e-6
    rep = run_validate(p)
    assert rep.check("oracle_vs_s_f_standard[standard]").passed


@pytest.mark.parametrize("make", [fig2, fig4, table1])
def test_oracle_checks_pass(make):
    rep = run_validate(make())
    for c in rep.checks:
        if c.name.startswith("oracle_vs_"):
            assert c.passed, c


def test_literal_matching_residual_fails():
    p = fig2()
    rep = run_validate(p)
    c = rep.check("cqnc_residual[configured]")
    assert not c.passed
    # bounded by gamma/(4 Omega) on any grid
    assert c.metric <= p.gamma_m / (4 * p.omega_m) * (1 + 1e-6)
    assert rep.check("cqnc_residual[exact_match]").passed
    assert not rep.passed


def test_exact_match_suppression():
    rep = run_validate(exact_cqnc_match(fig2()))
    assert rep.check("cqnc_residual[configured]").metric < 1e-9
    assert rep.check("backaction_suppression").metric > 9


def test_discrepancy_ledger():
    rep = run_validate(fig4())
    forms = {d["closed_form"]: d for d in rep.discrepancies}
    assert set(forms) == {"s_f_cqnc", "s_f_added", "s_f_standard_printed", "s_f_mismatch"}
    for d in forms.values():
        assert d["attributed"] and d["n_points"] > 0 and d["cause"]
        assert d["omega_at_max_hz"] == pytest.approx(d["omega_at_max"] / (2 * np.pi))


def test_sign_audit():
    rep = run_validate(fig2())
    assert rep.check("chi_s_prime_sign").passed
    assert rep.check("chi_s_prime_self_consistency").passed
    assert 0 <= rep.check("lambda_plus_squared_imag").metric <= 1


def test_substitutions_listed():
    rep = run_validate(fig2())
    assert any(s["printed"].startswith("A5") for s in rep.substitutions)


def test_report_serializes():
    rep = run_validate(fig2())
    doc = json.loads(json.dumps(rep.to_dict()))
    assert doc["passed"] is False
    text = rep.format_text()
    assert text.splitlines()[-1] == "overall: FAIL"
    assert "documented discrepancies:" in text


def test_missing_check_name():
    with pytest.raises(KeyError):
        run_validate(fig2()).check("nope")
