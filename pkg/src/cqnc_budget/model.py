"""Physical parameters, unit conventions and complex susceptibilities.

All internal quantities are angular: rates and frequencies in rad/s.
Human-facing constructors (``SystemParams.from_hz``) take Hz and multiply
by 2*pi.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

# CODATA 2018 (exact in the revised SI)
HBAR = 1.054571817e-34
K_B = 1.380649e-23
C_LIGHT = 299792458.0

TWO_PI = 2.0 * math.pi

# Symmetrized PSD assigned to each vacuum quadrature input.
VACUUM_PSD = 1.0


class ParameterError(ValueError):
    """A physical parameter violates its domain."""


class UnsupportedError(ParameterError):
    """A parameter value the linearized model does not cover."""


class DivergenceError(ArithmeticError):
    """A susceptibility denominator vanished exactly."""

    def __init__(self, response, omega=None):
        self.response = response
        self.omega = omega
        where = "" if omega is None else f" at omega={omega!r}"
        super().__init__(f"{response} diverged{where}")


_POSITIVE = ("kappa", "omega_m", "gamma_m", "gamma_qe", "g0", "omega_l",
             "power", "temperature", "mass")


@dataclass(frozen=True)
class SystemParams:
    """Hybrid cavity parameters in angular units (rad/s, W, K, kg).

    ``g_cs`` is the cavity-QD collective coupling that enters the
    linearized equations. ``opa_gain`` is the OPA gain in rad/s (not a
    fraction of kappa); use ``from_hz(opa_gain_over_kappa=...)`` for the
    fractional form.
    """

    kappa: float
    omega_m: float
    gamma_m: float
    gamma_qe: float
    g0: float
    g_cs: float
    opa_gain: float
    delta_qe: float
    omega_l: float
    power: float
    temperature: float
    mass: float
    opa_phase: float = 0.0
    delta_c: float = 0.0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ParameterError(f"{f.name} must be a real number, got {v!r}")
            if not math.isfinite(v):
                raise ParameterError(f"{f.name} must be finite, got {v!r}")
            object.__setattr__(self, f.name, float(v))
        for name in _POSITIVE:
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.g_cs < 0:
            raise ParameterError(f"g_cs must be >= 0, got {self.g_cs!r}")
        if self.opa_gain < 0:
            raise ParameterError(f"opa_gain must be >= 0, got {self.opa_gain!r}")
        if self.opa_phase != 0.0:
            raise UnsupportedError(
                "opa_phase != 0 is unsupported: the linearized equations "
                "are only valid for a pump phase of zero")

    @classmethod
    def from_hz(cls, *, kappa, omega_m, gamma_m, gamma_qe, g0, g_cs,
                opa_gain_over_kappa, delta_qe=None, laser_frequency=None,
                wavelength=None, power, temperature, mass, opa_phase=0.0,
                delta_c=0.0):
        """Build from ordinary frequencies in Hz.

        ``delta_qe`` defaults to ``omega_m``. Exactly one of
        ``laser_frequency`` (Hz) and ``wavelength`` (m) must be given.
        """
        if (laser_frequency is None) == (wavelength is None):
            raise ParameterError("give exactly one of laser_frequency and wavelength")
        if wavelength is not None:
            if wavelength <= 0:
                raise ParameterError(f"wavelength must be > 0, got {wavelength!r}")
            laser_frequency = C_LIGHT / wavelength
        if delta_qe is None:
            delta_qe = omega_m
        k = TWO_PI * kappa
        return cls(
            kappa=k,
            omega_m=TWO_PI * omega_m,
            gamma_m=TWO_PI * gamma_m,
            gamma_qe=TWO_PI * gamma_qe,
            g0=TWO_PI * g0,
            g_cs=TWO_PI * g_cs,
            opa_gain=opa_gain_over_kappa * k,
            delta_qe=TWO_PI * delta_qe,
            omega_l=TWO_PI * laser_frequency,
            power=power,
            temperature=temperature,
            mass=mass,
            opa_phase=opa_phase,
            delta_c=TWO_PI * delta_c,
        )

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @property
    def g(self) -> float:
        """Field-enhanced optomechanical coupling implied by ``power``."""
        return coupling_from_power(self.power, self).g

    @property
    def nbar(self) -> float:
        return thermal_occupation(self.temperature, self.omega_m)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class SusceptibilitySet:
    chi_m: np.ndarray
    chi_a: np.ndarray
    chi_s: np.ndarray
    xi: np.ndarray
    chi_s_prime: np.ndarray
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray


@dataclass(frozen=True)
class DerivedCouplings:
    g: float
    g_prime: float
    nbar: float


def _inv(den, name, omega):
    den = np.asarray(den)
    zero = den == 0
    if np.any(zero):
        w = np.broadcast_to(np.asarray(omega), den.shape)[zero]
        raise DivergenceError(name, float(np.ravel(w)[0]))
    return 1.0 / den


def susceptibilities(omega, params: SystemParams) -> SusceptibilitySet:
    """Evaluate the seven complex responses at signal frequency ``omega``.

    ``omega`` may be a scalar or an array (rad/s). Negative frequencies are
    accepted so that conjugation symmetry can be checked.
    """
    w = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("omega must be finite")
    p = params
    iw = 1j * w
    chi_m = p.omega_m * _inv(p.omega_m**2 - w**2 + 1j * p.gamma_m * w, "chi_m", w)
    chi_a = _inv(iw + p.kappa / 2, "chi_a", w)
    chi_s = _inv(iw + p.gamma_qe / 2, "chi_s", w)
    xi = _inv(iw + p.gamma_qe / 2 + p.delta_qe**2 * chi_s, "xi", w)
    chi_s_prime = -p.delta_qe * xi * chi_s
    lambda_plus = _inv(1.0 / chi_a - 2 * p.opa_gain, "lambda_plus", w)
    lambda_minus = _inv(1.0 / chi_a + 2 * p.opa_gain, "lambda_minus", w)
    return SusceptibilitySet(chi_m, chi_a, chi_s, xi, chi_s_prime,
                             lambda_plus, lambda_minus)


def coupling_from_power(power, params: SystemParams) -> DerivedCouplings:
    """Enhanced coupling from input power, ``P = 2 hbar omega_L kappa (g/g0)^2``."""
    if power < 0:
        raise ParameterError(f"power must be >= 0, got {power!r}")
    if params.g0 == 0:
        raise ParameterError("g0 is zero: power cannot be converted to a coupling")
    g = params.g0 * math.sqrt(power / (2 * HBAR * params.omega_l * params.kappa))
    return DerivedCouplings(g=g, g_prime=params.g_cs,
                            nbar=thermal_occupation(params.temperature, params.omega_m))


def power_from_coupling(g, params: SystemParams):
    g = np.asarray(g, dtype=float)
    out = 2 * HBAR * params.omega_l * params.kappa * (g / params.g0) ** 2
    return float(out) if out.ndim == 0 else out


def thermal_occupation(temperature, omega_m):
    """Mean thermal phonon number in the high-temperature limit, k_B T / (hbar Omega)."""
    if temperature < 0:
        raise ParameterError(f"temperature must be >= 0, got {temperature!r}")
    if omega_m <= 0:
        raise ParameterError(f"omega_m must be > 0, got {omega_m!r}")
    return K_B * temperature / (HBAR * omega_m)


def cqnc_residual(omega, params: SystemParams, g):
    """Back-action coefficient ``g^2 chi_m + G_cs^2 chi'_S``; zero means full cancellation."""
    s = susceptibilities(omega, params)
    return g**2 * s.chi_m + params.g_cs**2 * s.chi_s_prime


def exact_cqnc_match(params: SystemParams, g=None) -> SystemParams:
    """Return params tuned so that ``cqnc_residual`` vanishes at every frequency.

    With ``gamma_qe = gamma_m`` the QD response is
    ``-Delta / (Delta^2 + gamma^2/4 - w^2 + i w gamma)``; it equals
    ``-(Delta/Omega) chi_m`` once ``Delta^2 = Omega^2 - gamma^2/4``, and the
    coupling then has to absorb the ``Delta/Omega`` factor.
    """
    g = params.g if g is None else g
    gm = params.gamma_m
    if gm >= 2 * params.omega_m:
        raise ParameterError("no exact match for an overdamped oscillator")
    delta = math.sqrt(params.omega_m**2 - gm**2 / 4)
    return params.replace(gamma_qe=gm, delta_qe=delta,
                          g_cs=g * math.sqrt(params.omega_m / delta))
