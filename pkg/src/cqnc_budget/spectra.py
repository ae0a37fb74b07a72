"""Closed-form added-force noise spectra.

All functions return spectral densities in units of hbar*m*Omega*gamma_m
unless ``SpectrumOptions.normalization == "physical"``, in which case the
result is multiplied back to N^2/Hz.

Two families live here:

* the compact forms used for the figures (``s_f_added``, ``s_f_cqnc``,
  ``s_f_mismatch`` and ``s_f_standard_printed``), kept term for term;
* forms that follow the linearized model without approximation
  (``s_f_standard`` and ``s_f_full``). These are what the state-space
  oracle in :mod:`cqnc_budget.oracle` must reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (HBAR, VACUUM_PSD, SystemParams, power_from_coupling,
                    susceptibilities)

NORMALIZATIONS = ("dimensionless", "physical")


class NoTransductionError(ArithmeticError):
    """The force signal does not reach the output (g == 0)."""


@dataclass(frozen=True)
class SpectrumOptions:
    include_thermal: bool = False
    normalization: str = "dimensionless"

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}, "
                             f"got {self.normalization!r}")


@dataclass(frozen=True)
class MismatchSpec:
    """Which matching condition is broken and by how much.

    ``delta`` is the relative decay-rate mismatch (gamma_qe - gamma_m)/gamma_m,
    ``epsilon`` the relative coupling mismatch (G' - g)/g.
    """

    kind: str
    delta: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        if self.kind not in ("decay_rate", "coupling"):
            raise ValueError(f"kind must be 'decay_rate' or 'coupling', got {self.kind!r}")
        if not self.delta > -1:
            raise ValueError(f"delta must be > -1, got {self.delta!r}")
        if not self.epsilon > -1:
            raise ValueError(f"epsilon must be > -1, got {self.epsilon!r}")

    @classmethod
    def decay_rate(cls, delta):
        return cls("decay_rate", delta=delta)

    @classmethod
    def coupling(cls, epsilon):
        return cls("coupling", epsilon=epsilon)

    @property
    def value(self):
        return self.delta if self.kind == "decay_rate" else self.epsilon


@dataclass(frozen=True)
class SQLReference:
    s_sql: np.ndarray
    g_sql: np.ndarray
    p_sql: np.ndarray


_DEFAULT = SpectrumOptions()


def _finish(s, params, opts):
    opts = opts or _DEFAULT
    if opts.include_thermal:
        s = s + params.nbar
    if opts.normalization == "physical":
        s = s * HBAR * params.mass * params.omega_m * params.gamma_m
    return s


def _check_g(g):
    if not g > 0:
        raise NoTransductionError(f"no optomechanical transduction (g={g!r})")


def s_f_cqnc(omega, params: SystemParams):
    """Back-action-free floor set by the QD-ensemble noise."""
    w = np.asarray(omega, dtype=float)
    W = params.omega_m
    return 0.5 * (w**2 + W**2 + params.gamma_qe**2 / 4) / W**2


def s_f_added(omega, params: SystemParams, g, opts: SpectrumOptions | None = None):
    """Added noise under ideal cancellation: shot noise plus the QD floor."""
    _check_g(g)
    s = susceptibilities(omega, params)
    lm = s.lambda_minus
    shot = 0.5 * np.abs((lm * params.kappa - 1) / lm) ** 2 / (
        g**2 * np.abs(s.chi_m) ** 2 * 2 * params.gamma_m * params.kappa)
    return _finish(shot + s_f_cqnc(omega, params), params, opts)


def s_f_standard_printed(omega, params: SystemParams, g, opts=None):
    """Bad-cavity standard budget with the tabulated prefactors.

    Kept for reporting only; its minimum over g is sqrt(2)/(gamma_m|chi_m|)
    at a coupling that differs from ``sql_reference``. Use ``s_f_standard``.
    """
    _check_g(g)
    s = susceptibilities(omega, params)
    k, gm = params.kappa, params.gamma_m
    shot = 0.5 * (k / gm) / (g**2 * np.abs(s.chi_m) ** 2) / 4
    ba = 4 * g**2 / (k * gm)
    return _finish(shot + ba, params, opts)


def s_f_standard(omega, params: SystemParams, g, opts: SpectrumOptions | None = None):
    """Standard cavity (no QD channel) with the intracavity OPA.

    Shot noise rides on the de-amplified phase quadrature (lambda_-),
    back-action on the amplified amplitude quadrature (lambda_+). For
    omega << kappa and no OPA this tends to
    kappa/(8 gamma_m g^2 |chi_m|^2) + 2 g^2/(kappa gamma_m).
    """
    _check_g(g)
    s = susceptibilities(omega, params)
    k, gm = params.kappa, params.gamma_m
    lm = s.lambda_minus
    shot = np.abs(lm * k - 1) ** 2 / (np.abs(lm) ** 2 * 2 * gm * k * g**2 * np.abs(s.chi_m) ** 2)
    ba = k * g**2 * np.abs(s.lambda_plus) ** 2 / (2 * gm)
    return _finish(VACUUM_PSD * (shot + ba), params, opts)


def sql_reference(omega, params: SystemParams) -> SQLReference:
    """Standard quantum limit and the coupling/power that reach it.

    The minimum of ``s_f_standard`` over g is 1/(gamma_m |chi_m|) at every
    frequency and OPA gain; ``g_sql`` is the minimizing coupling, which
    reduces to sqrt(kappa)/(2 sqrt|chi_m|) for omega << kappa without OPA.
    """
    s = susceptibilities(omega, params)
    chi = np.abs(s.chi_m)
    s_sql = 1.0 / (params.gamma_m * chi)
    shot_lever = np.abs(params.kappa - 1 / s.lambda_minus)
    g_sql = np.sqrt(shot_lever / (params.kappa * chi * np.abs(s.lambda_plus)))
    return SQLReference(s_sql=s_sql, g_sql=g_sql, p_sql=power_from_coupling(g_sql, params))


def _mismatched(params, g, spec):
    if spec.kind == "decay_rate":
        return params.replace(gamma_qe=(1 + spec.delta) * params.gamma_m), 1.0
    ratio = (1 + spec.epsilon) ** 2
    return params, ratio


def mismatch_residual(omega, params: SystemParams, g, spec: MismatchSpec):
    """Residual back-action term left by an imperfect match.

    lambda_+^2 is taken as |lambda_+|^2 so that the term is real.
    """
    p, ratio = _mismatched(params, g, spec)
    s = susceptibilities(omega, p)
    lead = np.abs(s.lambda_plus) ** 2 * p.kappa * g**2 / p.gamma_m
    if spec.kind == "decay_rate":
        return lead * np.abs(1 + s.chi_s_prime / s.chi_m) ** 2
    return lead * np.abs(1 - ratio) ** 2 * np.ones_like(np.real(s.chi_m))


def s_f_mismatch(omega, params: SystemParams, g, spec: MismatchSpec, opts=None):
    p, _ = _mismatched(params, g, spec)
    s = s_f_cqnc(omega, p) + mismatch_residual(omega, params, g, spec)
    return _finish(s, params, opts)


def lambda_plus_sq_imag(omega, params: SystemParams):
    """|Im(lambda_+^2)| / |lambda_+|^2, the part dropped by the modulus reading."""
    lp = susceptibilities(omega, params).lambda_plus
    return np.abs(np.imag(lp**2)) / np.abs(lp) ** 2


def added_noise_terms(omega, params: SystemParams, g) -> dict:
    """Force-referred power of each vacuum input from the output phase quadrature.

    Each entry is |coefficient / force transfer|^2 for one input, taken from
    the solved output quadrature

        P_out = -g chi_m lambda_- sqrt(2 gamma_m kappa) F
                + (g^2 chi_m + G^2 chi'_S) lambda_+ lambda_- kappa x_in
                + (lambda_- kappa - 1) p_in
                - G lambda_- sqrt(kappa gamma_qE)
                  [chi_S (Delta chi'_S + 1) x_S,in + chi'_S p_S,in]
    """
    _check_g(g)
    p = params
    s = susceptibilities(omega, p)
    k, G = p.kappa, p.g_cs
    signal = -g * s.chi_m * s.lambda_minus * np.sqrt(2 * p.gamma_m * k)
    qd = -G * s.lambda_minus * np.sqrt(k * p.gamma_qe)
    coeffs = {
        "x_a_in": (g**2 * s.chi_m + G**2 * s.chi_s_prime) * s.lambda_plus * s.lambda_minus * k,
        "p_a_in": s.lambda_minus * k - 1,
        "x_S_in": qd * s.chi_s * (p.delta_qe * s.chi_s_prime + 1),
        "p_S_in": qd * s.chi_s_prime,
    }
    return {name: np.abs(c / signal) ** 2 for name, c in coeffs.items()}


def s_f_full(omega, params: SystemParams, g, opts: SpectrumOptions | None = None):
    """Added-force spectrum of the full linearized model, no approximations."""
    terms = added_noise_terms(omega, params, g)
    s = VACUUM_PSD * sum(terms.values())
    return _finish(s, params, opts)
