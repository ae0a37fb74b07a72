"""Cross-checks between the closed forms and the state-space oracle.

``run_validate`` never raises for a failed check; failures are entries in
the returned report. Printed compact forms that are known to differ from
the full model are collected in ``ValidationReport.discrepancies`` with the
frequency and size of the worst deviation and its cause.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .model import SystemParams, cqnc_residual, exact_cqnc_match, susceptibilities
from .oracle import (APPENDIX_SUBSTITUTIONS, appendix_pa_closed_form, build_linear_model,
                     frequency_response, oracle_added_spectrum, stability_check)
from .spectra import (MismatchSpec, lambda_plus_sq_imag, s_f_added, s_f_cqnc, s_f_full,
                      s_f_mismatch, s_f_standard, s_f_standard_printed)

ORACLE_RTOL = 1e-6
RESIDUAL_RTOL = 1e-12
# exact matching cancels analytically; what is left is rounding in chi_m + (Omega/Delta) chi'_S
EXACT_RESIDUAL_RTOL = 1e-9
SUPPRESSION_DECADES = 9
# (i w I - A) is badly conditioned at w = Omega for strong drive; both sides lose ~1e-8 there
APPENDIX_RTOL = 1e-6
STABILITY_RTOL = 1e-9
SIGN_RTOL = 1e-12
OPA_ONLY_GAIN = 0.1  # fraction of kappa
MISMATCH_DELTA = 0.3

_CAUSES = {
    "s_f_cqnc": "floor only: drops the shot-noise term and the back action left by the "
                "gamma_qE^2/4 term of chi'_S",
    "s_f_added": "shot term carries half the vacuum weight of the model and the QD floor "
                 "drops the |chi_m/chi'_S|^2 factor",
    "s_f_standard_printed": "bad-cavity limit (omega << kappa) with back-action prefactor 4 "
                            "instead of 2",
    "s_f_mismatch": "no shot-noise term and a residual prefactor twice the model's "
                    "back-action weight",
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    metric: float
    tolerance: float | None
    detail: str = ""
    extra: dict = field(default_factory=dict)


@dataclass
class ValidationReport:
    checks: list
    discrepancies: list
    substitutions: list
    stability: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
            "discrepancies": self.discrepancies,
            "substitutions": self.substitutions,
            "stability": self.stability,
        }

    def format_text(self) -> str:
        lines = []
        for c in self.checks:
            tol = "" if c.tolerance is None else f" (tol {c.tolerance:.1e})"
            lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.metric:.3e}{tol}"
                         + (f"  {c.detail}" if c.detail else ""))
        if self.discrepancies:
            lines.append("documented discrepancies:")
            for d in self.discrepancies:
                lines.append(f"  {d['closed_form']} [{d['config']}]: {d['n_points']} points, "
                             f"max rel {d['max_rel_deviation']:.3e} at "
                             f"{d['omega_at_max_hz']:.6g} Hz; {d['cause']}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def validation_grid(params: SystemParams, n=1000) -> np.ndarray:
    """``n`` log-spaced angular frequencies on [0.05 Omega, 5 Omega]."""
    W = params.omega_m
    return np.logspace(np.log10(0.05 * W), np.log10(5 * W), n)


def validation_configs(params: SystemParams) -> dict:
    """The parameter sets used for the oracle comparisons, with their exact closed form."""
    g = params.g
    matched = params.replace(gamma_qe=params.gamma_m, delta_qe=params.omega_m, g_cs=g)
    return {
        "standard": (params.replace(g_cs=0.0, opa_gain=0.0), s_f_standard),
        "opa_only": (params.replace(g_cs=0.0, opa_gain=OPA_ONLY_GAIN * params.kappa), s_f_standard),
        "matched_cqnc": (matched, s_f_full),
        "mismatch_delta": (matched.replace(gamma_qe=(1 + MISMATCH_DELTA) * params.gamma_m), s_f_full),
        "configured": (params, s_f_full),
    }


def _rel(a, b):
    return np.abs(a - b) / np.abs(b)


def _oracle_checks(params, w, oracle):
    checks = []
    for name, (p, closed) in validation_configs(params).items():
        g = params.g
        dev = _rel(closed(w, p, g), oracle[name])
        i = int(np.argmax(dev))
        checks.append(CheckResult(
            f"oracle_vs_{closed.__name__}[{name}]", bool(dev[i] < ORACLE_RTOL), float(dev[i]),
            ORACLE_RTOL, f"worst at {w[i] / (2 * np.pi):.6g} Hz"))
    return checks


def _discrepancies(params, w, oracle):
    cfgs = validation_configs(params)
    g = params.g
    matched = cfgs["matched_cqnc"][0]
    spec = MismatchSpec.decay_rate(MISMATCH_DELTA)
    cases = [
        ("s_f_cqnc", "matched_cqnc", s_f_cqnc(w, matched) * np.ones_like(w)),
        ("s_f_added", "matched_cqnc", s_f_added(w, matched, g)),
        ("s_f_standard_printed", "standard", s_f_standard_printed(w, cfgs["standard"][0], g)),
        ("s_f_mismatch", "mismatch_delta", s_f_mismatch(w, matched, g, spec)),
    ]
    out = []
    for form, cfg, values in cases:
        dev = _rel(values, oracle[cfg])
        hit = dev >= ORACLE_RTOL
        if not np.any(hit):
            continue
        p, exact = cfgs[cfg]
        explained = _rel(exact(w[hit], p, g), oracle[cfg][hit]) < ORACLE_RTOL
        i = int(np.argmax(dev))
        out.append({
            "closed_form": form,
            "config": cfg,
            "n_points": int(hit.sum()),
            "max_rel_deviation": float(dev[i]),
            "omega_at_max": float(w[i]),
            "omega_at_max_hz": float(w[i] / (2 * np.pi)),
            "attributed": bool(np.all(explained)),
            "cause": _CAUSES[form],
        })
    return out


def _residual_checks(params, w):
    g = params.g
    checks = []
    for name, p, tol in (("cqnc_residual[configured]", params, RESIDUAL_RTOL),
                         ("cqnc_residual[exact_match]", exact_cqnc_match(params), EXACT_RESIDUAL_RTOL)):
        rel = np.abs(cqnc_residual(w, p, g)) / np.abs(g**2 * susceptibilities(w, p).chi_m)
        i = int(np.argmax(rel))
        checks.append(CheckResult(name, bool(rel[i] < tol), float(rel[i]), tol,
                                  f"worst at {w[i] / (2 * np.pi):.6g} Hz"))
    # x_a_in -> P_out leakage with and without the QD channel
    on = frequency_response(build_linear_model(params, g), w).to_output[:, 0]
    off = frequency_response(build_linear_model(params.replace(g_cs=0.0), g), w).to_output[:, 0]
    ratio = np.abs(on) / np.abs(off)
    i = int(np.argmax(ratio))
    decades = float(-np.log10(ratio[i]))
    checks.append(CheckResult("backaction_suppression", decades >= SUPPRESSION_DECADES, decades,
                              float(SUPPRESSION_DECADES),
                              f"least suppression (decades) at {w[i] / (2 * np.pi):.6g} Hz"))
    return checks


def _appendix_check(params):
    W = params.omega_m
    worst, worst_verbatim = 0.0, 0.0
    for f in (0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0):
        res = appendix_pa_closed_form(params, params.g, f * W)
        worst = max(worst, res.max_rel_deviation)
        worst_verbatim = max(worst_verbatim, res.verbatim_max_rel_deviation)
    return CheckResult("appendix_pa_row", worst < APPENDIX_RTOL, worst, APPENDIX_RTOL,
                       "adopted symbol mapping",
                       {"verbatim_max_rel_deviation": worst_verbatim})


def _analytic_max_real(p):
    G, k = p.opa_gain, p.kappa
    mech = -p.gamma_m / 2
    if p.gamma_m > 2 * p.omega_m:
        mech = -p.gamma_m / 2 + np.sqrt(p.gamma_m**2 / 4 - p.omega_m**2)
    return max(2 * G - k / 2, -k / 2 - 2 * G, mech, -p.gamma_qe / 2)


def _stability(params):
    rep = stability_check(build_linear_model(params, params.g))
    expected = _analytic_max_real(params)
    rel = abs(rep.max_real_eigenvalue - expected) / abs(expected)
    info = {
        "stable": rep.stable,
        "max_real_eigenvalue": rep.max_real_eigenvalue,
        "expected_max_real_eigenvalue": expected,
        "opa_gain_over_kappa": params.opa_gain / params.kappa,
        "threshold_over_kappa": 0.25,
    }
    verdict = "stable" if rep.stable else "unstable (OPA gain >= kappa/4)"
    check = CheckResult("stability_eigenvalue", bool(rel < STABILITY_RTOL and not rep.indeterminate),
                        rel, STABILITY_RTOL, verdict, info)
    return check, info


def _sign_checks(params, w):
    p = params
    s = susceptibilities(w, p)
    D, gq = p.delta_qe, p.gamma_qe
    closed = -D / (D**2 - w**2 + 1j * w * gq + gq**2 / 4)
    self_dev = float(np.max(_rel(s.chi_s_prime, closed)))
    W = p.omega_m
    printed = W / (W**2 - w**2 + 1j * w * gq + gq**2 / 4)
    at_omega = p.replace(delta_qe=W)
    flip = float(np.max(_rel(susceptibilities(w, at_omega).chi_s_prime, -printed)))
    im = float(np.max(lambda_plus_sq_imag(w, p)))
    return [
        CheckResult("chi_s_prime_self_consistency", self_dev < SIGN_RTOL, self_dev, SIGN_RTOL,
                    "-Delta xi chi_S against its closed fraction"),
        CheckResult("chi_s_prime_sign", flip < SIGN_RTOL, flip, SIGN_RTOL,
                    "adopted chi'_S equals minus the positive printed fraction (Delta = Omega); "
                    "the minus sign is what lets G^2 chi'_S cancel g^2 chi_m"),
        CheckResult("lambda_plus_squared_imag", True, im, None,
                    "max |Im lambda_+^2|/|lambda_+|^2 on the grid, dropped by the modulus reading"),
    ]


def run_validate(params: SystemParams, n_points: int = 1000) -> ValidationReport:
    w = validation_grid(params, n_points)
    g = params.g
    oracle = {name: oracle_added_spectrum(build_linear_model(p, g), w)
              for name, (p, _) in validation_configs(params).items()}
    checks = _oracle_checks(params, w, oracle)
    checks += _residual_checks(params, w)
    checks.append(_appendix_check(params))
    stab_check, stab = _stability(params)
    checks.append(stab_check)
    checks += _sign_checks(params, w)
    subs = [{"printed": a, "adopted": b, "note": c} for a, b, c in APPENDIX_SUBSTITUTIONS]
    return ValidationReport(checks=checks, discrepancies=_discrepancies(params, w, oracle),
                            substitutions=subs, stability=stab)
