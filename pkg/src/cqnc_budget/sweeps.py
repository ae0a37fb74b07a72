"""Frequency, power and mismatch sweeps producing plot-ready series."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import __version__
from .model import HBAR, TWO_PI, SystemParams, coupling_from_power
from .oracle import build_linear_model, oracle_added_spectrum, stability_check
from .spectra import (MismatchSpec, SpectrumOptions, mismatch_residual,
                      s_f_added, s_f_cqnc, s_f_full, s_f_mismatch,
                      s_f_standard, sql_reference)

AXES = ("frequency", "power", "mismatch_delta", "mismatch_epsilon")
CHANNELS = ("sql", "standard", "added", "cqnc", "mismatch", "oracle", "full", "residual")
SPACINGS = ("linear", "log")

PICO = 1e-12
DEFAULT_POWER_BAND = (1e-3 * PICO, 1e6 * PICO)

UNITS_NOTE = ("config frequencies and rates are in Hz and are multiplied by 2*pi; "
              "all internal math and the frequency axis are angular (rad/s); "
              "spectra are in units of hbar*m*Omega*gamma_m unless normalization is physical")


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    """What to sweep and which channels to evaluate.

    ``power`` is the drive power held fixed on frequency and mismatch axes
    (defaults to ``params.power``); ``eval_omega`` is the frequency held
    fixed on power and mismatch axes (defaults to the mechanical frequency).
    """

    axis: str
    start: float
    stop: float
    count: int
    params: SystemParams
    spacing: str = "linear"
    channels: tuple = ("sql", "cqnc")
    power: float | None = None
    eval_omega: float | None = None
    mismatch: MismatchSpec | None = None
    options: SpectrumOptions = field(default_factory=SpectrumOptions)

    def __post_init__(self):
        if self.axis not in AXES:
            raise SweepError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.spacing not in SPACINGS:
            raise SweepError(f"spacing must be one of {SPACINGS}, got {self.spacing!r}")
        if not isinstance(self.count, int) or self.count < 2:
            raise SweepError(f"count must be an integer >= 2, got {self.count!r}")
        if not self.start < self.stop:
            raise SweepError(f"need min < max, got {self.start!r} >= {self.stop!r}")
        if self.spacing == "log" and self.start <= 0:
            raise SweepError("log spacing requires min > 0")
        object.__setattr__(self, "channels", tuple(self.channels))
        unknown = [c for c in self.channels if c not in CHANNELS]
        if unknown:
            raise SweepError(f"unknown channel(s) {unknown}; choose from {CHANNELS}")
        if len(set(self.channels)) != len(self.channels):
            raise SweepError("duplicate channel")
        if self.axis.startswith("mismatch") and self.mismatch is not None:
            kind = "decay_rate" if self.axis == "mismatch_delta" else "coupling"
            if self.mismatch.kind != kind:
                raise SweepError(f"axis {self.axis} needs a {kind} mismatch")

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.count)
        return np.linspace(self.start, self.stop, self.count)

    @property
    def drive_power(self) -> float:
        return self.params.power if self.power is None else self.power

    @property
    def omega0(self) -> float:
        return self.params.omega_m if self.eval_omega is None else self.eval_omega


@dataclass
class SpectrumSeries:
    axis_label: str
    axis_values: np.ndarray
    channel_values: dict
    metadata: dict

    def __post_init__(self):
        n = len(self.axis_values)
        for name, v in self.channel_values.items():
            if len(v) != n:
                raise ValueError(f"channel {name} has {len(v)} values for {n} axis points")


def default_frequency_config(params: SystemParams, channels=("sql", "standard", "added", "cqnc", "oracle"),
                             **kw) -> SweepConfig:
    """The [0.5 Omega, 1.5 Omega] band with 2000 linear points."""
    W = params.omega_m
    kw.setdefault("count", 2000)
    return SweepConfig(axis="frequency", start=0.5 * W, stop=1.5 * W,
                       params=params, channels=channels, **kw)


def default_power_config(params: SystemParams, channels=("sql", "standard", "added", "cqnc"),
                         **kw) -> SweepConfig:
    kw.setdefault("count", 400)
    return SweepConfig(axis="power", start=DEFAULT_POWER_BAND[0], stop=DEFAULT_POWER_BAND[1],
                       spacing="log", params=params, channels=channels, **kw)


def _params_echo(p: SystemParams) -> dict:
    d = p.as_dict()
    d["g"] = p.g
    d["nbar"] = p.nbar
    return d


def _metadata(cfg: SweepConfig, errors) -> dict:
    p = cfg.params
    stab = stability_check(build_linear_model(p, coupling_from_power(cfg.drive_power, p).g))
    meta = {
        "tool": "cqnc_budget",
        "version": __version__,
        "units": UNITS_NOTE,
        "axis": cfg.axis,
        "range": {"min": cfg.start, "max": cfg.stop, "count": cfg.count, "spacing": cfg.spacing},
        "channels": list(cfg.channels),
        "normalization": cfg.options.normalization,
        "thermal": cfg.options.include_thermal,
        "drive_power": cfg.drive_power,
        "eval_omega": cfg.omega0,
        "mismatch": None if cfg.mismatch is None else {
            "kind": cfg.mismatch.kind, "delta": cfg.mismatch.delta, "epsilon": cfg.mismatch.epsilon},
        "params": _params_echo(p),
        "stability": {
            "stable": stab.stable,
            "max_real_eigenvalue": stab.max_real_eigenvalue,
            "annotation": "stable" if stab.stable else
            "unstable model: spectra are formal frequency-domain objects",
        },
        "errors": errors,
    }
    return meta


def config_from_metadata(meta: dict) -> SweepConfig:
    """Rebuild the SweepConfig of a run from its metadata block."""
    params = {k: v for k, v in meta["params"].items() if k not in ("g", "nbar")}
    mm = meta["mismatch"]
    rng = meta["range"]
    return SweepConfig(
        axis=meta["axis"], start=rng["min"], stop=rng["max"], count=rng["count"],
        spacing=rng["spacing"], params=SystemParams(**params), channels=tuple(meta["channels"]),
        power=meta["drive_power"], eval_omega=meta["eval_omega"],
        mismatch=None if mm is None else MismatchSpec(**mm),
        options=SpectrumOptions(include_thermal=meta["thermal"],
                                normalization=meta["normalization"]))


def run_sweep(cfg: SweepConfig) -> SpectrumSeries:
    """Run the sweep that matches ``cfg.axis``."""
    if cfg.axis.startswith("mismatch"):
        return mismatch_sweep(cfg)
    if cfg.axis == "power":
        return power_sweep(cfg)
    return frequency_sweep(cfg)


def _evaluate(channel, omega, params, g, cfg, spec):
    opts = cfg.options
    if channel == "sql":
        return sql_reference(omega, params).s_sql * _scale(params, opts)
    if channel == "cqnc":
        return s_f_cqnc(omega, params) * np.ones_like(omega) * _scale(params, opts)
    if channel == "standard":
        return s_f_standard(omega, params, g, opts)
    if channel == "added":
        return s_f_added(omega, params, g, opts)
    if channel == "full":
        return s_f_full(omega, params, g, opts)
    if channel == "oracle":
        return oracle_added_spectrum(build_linear_model(params, g), omega, opts)
    if spec is None:
        raise SweepError(f"channel {channel!r} needs a mismatch spec")
    if channel == "mismatch":
        return s_f_mismatch(omega, params, g, spec, opts)
    return mismatch_residual(omega, params, g, spec) * _scale(params, opts)


def _scale(params, opts):
    if opts.normalization == "physical":
        return HBAR * params.mass * params.omega_m * params.gamma_m
    return 1.0


def _channel(channel, evaluate, errors):
    try:
        return np.asarray(evaluate(), dtype=float)
    except SweepError:
        raise
    except (ArithmeticError, ValueError) as exc:
        errors.append({"channel": channel, "error": str(exc)})
        return None


def frequency_sweep(cfg: SweepConfig) -> SpectrumSeries:
    if cfg.axis != "frequency":
        raise SweepError("frequency_sweep needs axis='frequency'")
    return _frequency_like(cfg, cfg.mismatch)


def _frequency_like(cfg, spec):
    w = cfg.grid()
    p = cfg.params
    g = coupling_from_power(cfg.drive_power, p).g
    errors = []
    values = {}
    for ch in cfg.channels:
        v = _channel(ch, lambda: _evaluate(ch, w, p, g, cfg, spec), errors)
        if v is None:
            v = _pointwise(ch, w, lambda x: _evaluate(ch, x, p, g, cfg, spec), errors)
        values[ch] = v
    return SpectrumSeries("omega_rad_per_s", w, values, _metadata(cfg, errors))


def _pointwise(ch, grid, fn, errors):
    out = np.empty(len(grid))
    for i, x in enumerate(grid):
        try:
            out[i] = float(fn(np.array([x]))[0])
        except SweepError:
            raise
        except (ArithmeticError, ValueError) as exc:
            errors.append({"channel": ch, "index": i, "axis_value": float(x), "error": str(exc)})
            out[i] = np.nan
    return out


def power_sweep(cfg: SweepConfig) -> SpectrumSeries:
    if cfg.axis != "power":
        raise SweepError("power_sweep needs axis='power'")
    P = cfg.grid()
    p = cfg.params
    w = np.array([cfg.omega0])
    errors = []
    values = {}
    for ch in cfg.channels:
        def at(power, ch=ch):
            g = coupling_from_power(float(power), p).g
            return _evaluate(ch, w, p, g, cfg, cfg.mismatch)[0]
        values[ch] = _pointwise(ch, P, lambda x, at=at: np.array([at(x[0])]), errors)
    return SpectrumSeries("power_W", P, values, _metadata(cfg, errors))


def mismatch_sweep(cfg: SweepConfig) -> SpectrumSeries:
    """Perfect and mismatched cancellation side by side.

    On a frequency axis ``cfg.mismatch`` fixes the mismatch; on a
    ``mismatch_*`` axis the mismatch value is swept at ``eval_omega``.
    The perfect (``cqnc``) and mismatched (``mismatch``) channels are always
    emitted, followed by any other requested channels.
    """
    channels = ("cqnc", "mismatch") + tuple(c for c in cfg.channels if c not in ("cqnc", "mismatch"))
    if cfg.axis == "frequency":
        if cfg.mismatch is None:
            raise SweepError("a frequency mismatch sweep needs a MismatchSpec")
        sub = _replace(cfg, channels=channels)
        return _frequency_like(sub, cfg.mismatch)
    if not cfg.axis.startswith("mismatch"):
        raise SweepError("mismatch_sweep needs a frequency or mismatch_* axis")
    kind = "decay_rate" if cfg.axis == "mismatch_delta" else "coupling"
    sub = _replace(cfg, channels=channels)
    p = cfg.params
    g = coupling_from_power(cfg.drive_power, p).g
    w = np.array([cfg.omega0])
    values = {}
    errors = []
    for ch in channels:
        def at(x, ch=ch):
            spec = MismatchSpec(kind, delta=x) if kind == "decay_rate" else MismatchSpec(kind, epsilon=x)
            return np.array([_evaluate(ch, w, p, g, sub, spec)[0]])
        values[ch] = _pointwise(ch, sub.grid(), lambda x, at=at: at(float(x[0])), errors)
    label = "delta" if kind == "decay_rate" else "epsilon"
    return SpectrumSeries(label, sub.grid(), values, _metadata(sub, errors))


def _replace(cfg, **kw):
    return dataclasses.replace(cfg, **kw)


@dataclass(frozen=True)
class MinPowerResult:
    p_star: float
    s_star: float
    interior: bool
    message: str = ""


def find_min_power(params: SystemParams, channel: str, eval_omega=None,
                   options: SpectrumOptions | None = None,
                   bracket=DEFAULT_POWER_BAND, rtol=1e-6, scan=241) -> MinPowerResult:
    """Minimize a power-dependent channel over drive power.

    A log-spaced scan locates the best grid point; golden-section search in
    log-power then refines it. A minimum on the bracket edge is returned with
    ``interior=False``.
    """
    if channel not in ("standard", "added", "full", "oracle"):
        raise SweepError(f"channel {channel!r} does not depend on power")
    opts = options or SpectrumOptions()
    w = np.array([params.omega_m if eval_omega is None else eval_omega])
    cfg = SweepConfig(axis="power", start=bracket[0], stop=bracket[1], count=2,
                      spacing="log", params=params, options=opts)

    def f(logp):
        g = coupling_from_power(10.0**logp, params).g
        return float(_evaluate(channel, w, params, g, cfg, None)[0])

    lo, hi = math.log10(bracket[0]), math.log10(bracket[1])
    xs = np.linspace(lo, hi, scan)
    ys = np.array([f(x) for x in xs])
    i = int(np.argmin(ys))
    if i == 0 or i == len(xs) - 1:
        return MinPowerResult(p_star=float(10.0 ** xs[i]), s_star=float(ys[i]), interior=False,
                              message="no interior minimum: channel is monotone on the bracket")
    # relative power tolerance rtol  <=>  absolute log10 tolerance rtol/ln(10)
    xtol = rtol / math.log(10) / max(abs(xs[i]), 1.0) / 10
    res = optimize.minimize_scalar(f, bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden",
                                   options={"xtol": xtol})
    return MinPowerResult(p_star=float(10.0 ** res.x), s_star=float(res.fun), interior=True)


def hz(x):
    """Angular frequency to Hz, for display."""
    return np.asarray(x) / TWO_PI
