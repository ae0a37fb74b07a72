"""State-space rebuild of the linearized model.

The six quadratures (x_b, p_b, x_a, p_a, x_S, p_S) obey dq/dt = A q + B u
with inputs u = (x_a_in, p_a_in, x_S_in, p_S_in, F). Transfer functions
come from a dense LU solve of (i w I - A) H = B at every frequency, so
nothing here relies on the hand-solved susceptibilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import HBAR, VACUUM_PSD, SystemParams, susceptibilities
from .spectra import NoTransductionError, SpectrumOptions

STATES = ("x_b", "p_b", "x_a", "p_a", "x_S", "p_S")
INPUTS = ("x_a_in", "p_a_in", "x_S_in", "p_S_in", "F")
_PA = STATES.index("p_a")
_PA_IN = INPUTS.index("p_a_in")
_F = INPUTS.index("F")

# reciprocal condition number below which a frequency is reported as singular
_RCOND_MIN = 1e-14


class SingularResponseError(ArithmeticError):
    def __init__(self, omega, rcond):
        self.omega = omega
        self.rcond = rcond
        super().__init__(f"(i w I - A) is near-singular at omega={omega!r} (rcond={rcond:.3g})")


@dataclass(frozen=True)
class LinearModel:
    drift: np.ndarray
    input: np.ndarray
    noise_psd: np.ndarray
    kappa: float
    g: float
    params: SystemParams = field(repr=False)


@dataclass(frozen=True)
class TransferSet:
    to_output: np.ndarray
    signal_gain: np.ndarray
    state: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    max_real_eigenvalue: float
    indeterminate: bool = False


def build_linear_model(params: SystemParams, g) -> LinearModel:
    p = params
    k, G, Gcs = p.kappa, p.opa_gain, p.g_cs
    A = np.array([
        [0.0, p.omega_m, 0.0, 0.0, 0.0, 0.0],
        [-p.omega_m, -p.gamma_m, -g, 0.0, 0.0, 0.0],
        [0.0, 0.0, -k / 2 + 2 * G, 0.0, 0.0, 0.0],
        [-g, 0.0, 0.0, -k / 2 - 2 * G, -Gcs, 0.0],
        [0.0, 0.0, 0.0, 0.0, -p.gamma_qe / 2, -p.delta_qe],
        [0.0, 0.0, -Gcs, 0.0, p.delta_qe, -p.gamma_qe / 2],
    ])
    B = np.zeros((6, 5))
    B[2, 0] = B[3, 1] = np.sqrt(k)
    B[4, 2] = B[5, 3] = np.sqrt(p.gamma_qe)
    B[1, 4] = np.sqrt(2 * p.gamma_m)
    psd = np.array([VACUUM_PSD] * 4 + [p.nbar])
    return LinearModel(drift=A, input=B, noise_psd=psd, kappa=k, g=float(g), params=p)


def frequency_response(model: LinearModel, omega) -> TransferSet:
    """Transfer matrices at one or many frequencies.

    ``state`` has shape (..., 6, 5); ``to_output`` maps the inputs to the
    output phase quadrature, P_out = sqrt(kappa) P_a - P_in.
    """
    w = np.asarray(omega, dtype=float)
    M = 1j * w[..., None, None] * np.eye(6) - model.drift
    try:
        Minv = np.linalg.inv(M)
    except np.linalg.LinAlgError:
        flat_w = np.ravel(np.broadcast_to(w, M.shape[:-2]))
        for x, m in zip(flat_w, M.reshape(-1, 6, 6)):
            if np.linalg.matrix_rank(m) < 6:
                raise SingularResponseError(float(x), 0.0) from None
        raise
    rcond = 1.0 / (np.abs(M).sum(axis=-2).max(axis=-1) * np.abs(Minv).sum(axis=-2).max(axis=-1))
    bad = ~(rcond > _RCOND_MIN)
    if np.any(bad):
        i = np.flatnonzero(np.ravel(bad))[0]
        raise SingularResponseError(float(np.ravel(w)[i]), float(np.ravel(rcond)[i]))
    H = np.linalg.solve(M, np.broadcast_to(model.input.astype(complex), M.shape[:-2] + (6, 5)))
    out = np.sqrt(model.kappa) * H[..., _PA, :]
    out[..., _PA_IN] -= 1.0
    return TransferSet(to_output=out, signal_gain=out[..., _F], state=H)


def oracle_added_spectrum(model: LinearModel, omega, opts: SpectrumOptions | None = None):
    """Added-force noise obtained by referring every input to the force channel."""
    opts = opts or SpectrumOptions()
    tr = frequency_response(model, omega)
    gain = tr.signal_gain
    if np.any(np.abs(gain) < np.finfo(float).tiny) or model.g == 0:
        raise NoTransductionError("no transduction: force does not reach the output")
    ratio = np.abs(tr.to_output / gain[..., None]) ** 2
    psd = model.noise_psd.copy()
    if not opts.include_thermal:
        psd[_F] = 0.0
    s = ratio @ psd
    if opts.normalization == "physical":
        p = model.params
        s = s * HBAR * p.mass * p.omega_m * p.gamma_m
    return s


def stability_check(model: LinearModel) -> StabilityReport:
    try:
        ev = np.linalg.eigvals(model.drift)
    except np.linalg.LinAlgError:
        return StabilityReport(stable=False, max_real_eigenvalue=float("nan"), indeterminate=True)
    m = float(np.max(ev.real))
    return StabilityReport(stable=bool(m < 0), max_real_eigenvalue=m)


# -- closed-form P_a assembly ------------------------------------------------

APPENDIX_SUBSTITUTIONS = (
    ("kappa_a", "kappa", "cavity decay rate"),
    ("kappa_M", "gamma_qE", "QD linewidth in B5"),
    ("G_OM", "G_cs", "cavity-QD coupling in C2, B6"),
    ("omega_m in A4", "Omega", "mechanical frequency"),
    ("A5 = chi_m omega_m", "A5 = -Delta_qe chi_S",
     "QD response to P_S; sign chosen so the printed assembly matches X_S = -Delta chi_S P_S"),
    ("B5 = chi_m sqrt(kappa_M)", "B5 = chi_S sqrt(gamma_qE)", "QD response to its own noise"),
    ("A6 = chi'_m sqrt(gamma_m)", "A6 = chi'_S sqrt(gamma_qE)", "QD noise entering P_S"),
    ("B2 = chi_m sqrt(gamma_m) g lambda_-", "B2 = chi_m sqrt(2 gamma_m) g lambda_-",
     "force enters with sqrt(2 gamma_m)"),
    ("B3 = chi_m sqrt(gamma_m)", "B3 = chi_m sqrt(2 gamma_m)", "force enters with sqrt(2 gamma_m)"),
)


@dataclass(frozen=True)
class AppendixCoefficients:
    a1: complex
    a2: complex
    a3: complex
    a4: complex
    a5: complex
    a6: complex
    b2: complex
    b3: complex
    b5: complex
    b6: complex
    c2: complex
    d2: complex
    d6: complex


@dataclass(frozen=True)
class AppendixResult:
    coeffs: AppendixCoefficients
    pa_row: np.ndarray
    matrix_row: np.ndarray
    max_rel_deviation: float
    verbatim_row: np.ndarray
    verbatim_max_rel_deviation: float


def _coefficients(params, g, omega, verbatim=False):
    p = params
    s = susceptibilities(omega, p)
    k = p.kappa
    sk = np.sqrt(k)
    if verbatim:
        a5 = s.chi_m * p.omega_m
        b5 = s.chi_m * np.sqrt(p.gamma_qe)
        a6 = s.chi_s_prime * np.sqrt(p.gamma_m)
        force = np.sqrt(p.gamma_m)
    else:
        a5 = -p.delta_qe * s.chi_s
        b5 = s.chi_s * np.sqrt(p.gamma_qe)
        a6 = s.chi_s_prime * np.sqrt(p.gamma_qe)
        force = np.sqrt(2 * p.gamma_m)
    return AppendixCoefficients(
        a1=sk * s.lambda_plus,
        a2=g**2 * s.chi_m * s.lambda_plus * s.lambda_minus * sk,
        a3=g * s.chi_m * sk * s.lambda_plus,
        a4=1j * omega / p.omega_m,
        a5=a5,
        a6=a6,
        b2=s.chi_m * force * g * s.lambda_minus,
        b3=s.chi_m * force,
        b5=b5,
        b6=p.g_cs * s.xi * s.lambda_plus * sk,
        c2=p.g_cs * s.lambda_minus,
        d2=sk * s.lambda_minus,
        d6=s.xi * np.sqrt(p.gamma_qe),
    )


def _assemble(c):
    return np.array([
        c.a2 + c.a5 * c.b6 * c.c2,
        c.d2,
        c.a5 * c.a6 * c.c2 - c.b5 * c.c2,
        -c.a5 * c.c2 * c.d6,
        -c.b2,
    ])


def _max_rel(a, b):
    scale = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / scale) if scale > 0 else float(np.max(np.abs(a - b)))


def appendix_pa_closed_form(params: SystemParams, g, omega) -> AppendixResult:
    """Assemble the intracavity P_a row from the coefficient ledger.

    The row is compared against the p_a row of the matrix inversion, both
    with the adopted symbol mapping (``APPENDIX_SUBSTITUTIONS``) and with
    the symbols read literally.
    """
    omega = float(omega)
    coeffs = _coefficients(params, g, omega)
    row = _assemble(coeffs)
    verbatim = _assemble(_coefficients(params, g, omega, verbatim=True))
    matrix = frequency_response(build_linear_model(params, g), omega).state[_PA, :]
    return AppendixResult(
        coeffs=coeffs,
        pa_row=row,
        matrix_row=matrix,
        max_rel_deviation=_max_rel(row, matrix),
        verbatim_row=verbatim,
        verbatim_max_rel_deviation=_max_rel(verbatim, matrix),
    )
