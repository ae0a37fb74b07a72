"""Flat ``key = value`` run configuration.

Frequencies and rates are written in Hz and converted to rad/s on load.
``opa_gain`` is a fraction of kappa. Unknown keys abort parsing.

Example::

    preset = fig2
    opa_gain = 0.3          # fraction of kappa
    axis = frequency
    min = 150e3             # Hz
    max = 450e3
    channels = sql, standard, cqnc
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import C_LIGHT, TWO_PI, ParameterError, SystemParams
from .presets import PRESETS, get_preset
from .spectra import NORMALIZATIONS, MismatchSpec, SpectrumOptions
from .sweeps import (AXES, CHANNELS, DEFAULT_POWER_BAND, SPACINGS, SweepConfig,
                     SweepError)

FORMATS = ("csv", "json")

# key -> SystemParams field, scale from config units to internal units
_HZ_KEYS = {
    "kappa": "kappa", "omega_m": "omega_m", "gamma_m": "gamma_m",
    "gamma_qe": "gamma_qe", "g0": "g0", "g_cs": "g_cs",
    "delta_c": "delta_c", "delta_qe": "delta_qe", "laser_frequency": "omega_l",
}
_PLAIN_KEYS = {"power": "power", "temperature": "temperature", "mass": "mass",
               "opa_phase": "opa_phase"}
_POSITIVE_KEYS = {"kappa", "omega_m", "gamma_m", "gamma_qe", "g0", "laser_frequency",
                  "wavelength", "power", "temperature", "mass", "count"}
_NONNEGATIVE_KEYS = {"g_cs", "opa_gain"}
_SWEEP_KEYS = {"axis", "min", "max", "count", "spacing", "channels", "eval_frequency",
               "mismatch_kind", "mismatch_value"}
_OUTPUT_KEYS = {"thermal", "normalization", "output", "format"}
KNOWN_KEYS = (set(_HZ_KEYS) | set(_PLAIN_KEYS) | {"preset", "opa_gain", "wavelength"}
              | _SWEEP_KEYS | _OUTPUT_KEYS)
_STRING_KEYS = {"preset", "axis", "spacing", "channels", "mismatch_kind",
                "thermal", "normalization", "output", "format"}

_DEFAULT_CHANNELS = {
    "frequency": ("sql", "standard", "added", "cqnc", "oracle"),
    "power": ("sql", "standard", "added", "cqnc"),
    "mismatch_delta": ("cqnc", "mismatch", "residual"),
    "mismatch_epsilon": ("cqnc", "mismatch", "residual"),
}


class ConfigError(ValueError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    sweep: SweepConfig
    options: SpectrumOptions = field(default_factory=SpectrumOptions)
    output: str | None = None
    format: str = "csv"
    preset: str = "table1"


def _tokenize(text):
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, key)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first set on line {entries[key][0]})",
                              lineno, key)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno, key)
        entries[key] = (lineno, value)
    return entries


def _number(key, entry):
    lineno, value = entry
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as a number", lineno, key) from None
    if not math.isfinite(x):
        raise ConfigError(f"{key}: value must be finite, got {value!r}", lineno, key)
    if key in _POSITIVE_KEYS and x <= 0:
        raise ConfigError(f"{key} must be > 0 (got {value})", lineno, key)
    if key in _NONNEGATIVE_KEYS and x < 0:
        raise ConfigError(f"{key} must be >= 0 (got {value})", lineno, key)
    return x


def _choice(key, entry, allowed):
    lineno, value = entry
    if value not in allowed:
        raise ConfigError(f"{key} must be one of {', '.join(allowed)} (got {value!r})", lineno, key)
    return value


def _bool(key, entry):
    lineno, value = entry
    v = value.lower()
    if v in ("true", "yes", "on", "1"):
        return True
    if v in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{key} must be true or false (got {value!r})", lineno, key)


def _line_for(exc, entries):
    msg = str(exc)
    for key, (lineno, _) in entries.items():
        field_name = _HZ_KEYS.get(key) or _PLAIN_KEYS.get(key) or key
        if msg.startswith(field_name + " ") or msg.startswith(key + " "):
            return lineno, key
    return None, None


def _build_params(entries, preset):
    p = get_preset(preset)
    nums = {k: _number(k, entries[k]) for k in entries if k not in _STRING_KEYS
            and k not in _SWEEP_KEYS}
    changes = {}
    for key, fname in _HZ_KEYS.items():
        if key in nums:
            changes[fname] = TWO_PI * nums[key]
    for key, fname in _PLAIN_KEYS.items():
        if key in nums:
            changes[fname] = nums[key]
    if "wavelength" in nums:
        if "laser_frequency" in nums:
            raise ConfigError("give laser_frequency or wavelength, not both",
                              entries["wavelength"][0], "wavelength")
        changes["omega_l"] = TWO_PI * C_LIGHT / nums["wavelength"]
    if "omega_m" in nums and "delta_qe" not in nums:
        changes["delta_qe"] = changes["omega_m"]
    kappa = changes.get("kappa", p.kappa)
    if "opa_gain" in nums:
        changes["opa_gain"] = nums["opa_gain"] * kappa
    elif "kappa" in nums:
        changes["opa_gain"] = p.opa_gain / p.kappa * kappa
    try:
        return p.replace(**changes)
    except ParameterError as exc:
        line, key = _line_for(exc, entries)
        raise ConfigError(str(exc), line, key) from None


def _build_sweep(entries, params, options, default_axis):
    axis = _choice("axis", entries["axis"], AXES) if "axis" in entries else default_axis
    spacing = None
    if "spacing" in entries:
        spacing = _choice("spacing", entries["spacing"], SPACINGS)
    W = params.omega_m
    if axis == "frequency":
        lo, hi, n, sp = 0.5 * W, 1.5 * W, 2000, "linear"
        scale = TWO_PI
    elif axis == "power":
        lo, hi, n, sp = DEFAULT_POWER_BAND[0], DEFAULT_POWER_BAND[1], 400, "log"
        scale = 1.0
    else:
        lo, hi, n, sp = 0.0, 1.0, 101, "linear"
        scale = 1.0
    if "min" in entries:
        lo = _number("min", entries["min"]) * scale
    if "max" in entries:
        hi = _number("max", entries["max"]) * scale
    if "count" in entries:
        c = _number("count", entries["count"])
        if c != int(c):
            raise ConfigError(f"count must be an integer (got {entries['count'][1]})",
                              entries["count"][0], "count")
        n = int(c)
    sp = spacing or sp
    channels = _DEFAULT_CHANNELS[axis]
    if "channels" in entries:
        lineno, value = entries["channels"]
        channels = tuple(c.strip() for c in value.split(",") if c.strip())
        bad = [c for c in channels if c not in CHANNELS]
        if bad:
            raise ConfigError(f"unknown channel(s) {', '.join(bad)}; choose from "
                              f"{', '.join(CHANNELS)}", lineno, "channels")
    eval_omega = None
    if "eval_frequency" in entries:
        eval_omega = TWO_PI * _number("eval_frequency", entries["eval_frequency"])
    mismatch = None
    if "mismatch_kind" in entries or "mismatch_value" in entries or axis.startswith("mismatch"):
        default_kind = "coupling" if axis == "mismatch_epsilon" else "decay_rate"
        kind = (_choice("mismatch_kind", entries["mismatch_kind"], ("decay_rate", "coupling"))
                if "mismatch_kind" in entries else default_kind)
        value = _number("mismatch_value", entries["mismatch_value"]) if "mismatch_value" in entries \
            else (0.3 if kind == "decay_rate" else 0.01)
        try:
            mismatch = (MismatchSpec(kind, delta=value) if kind == "decay_rate"
                        else MismatchSpec(kind, epsilon=value))
        except ValueError as exc:
            line = entries.get("mismatch_value", (None,))[0]
            raise ConfigError(str(exc), line, "mismatch_value") from None
    try:
        return SweepConfig(axis=axis, start=lo, stop=hi, count=n, params=params, spacing=sp,
                           channels=channels, eval_omega=eval_omega, mismatch=mismatch,
                           options=options)
    except SweepError as exc:
        raise ConfigError(str(exc)) from None


def parse_config(text: str, preset: str | None = None,
                 default_axis: str = "frequency") -> RunConfig:
    """Parse and validate a configuration document.

    ``preset`` supplies the base parameter set when the document does not
    name one; giving both is an error. ``default_axis`` applies when the
    document has no ``axis`` key.
    """
    entries = _tokenize(text)
    if "preset" in entries:
        if preset is not None:
            raise ConfigError("preset given both on the command line and in the config",
                              entries["preset"][0], "preset")
        preset = _choice("preset", entries["preset"], PRESETS)
    preset = preset or "table1"
    if preset not in PRESETS:
        raise ConfigError(f"preset must be one of {', '.join(PRESETS)} (got {preset!r})")
    params = _build_params(entries, preset)
    thermal = _bool("thermal", entries["thermal"]) if "thermal" in entries else False
    norm = (_choice("normalization", entries["normalization"], NORMALIZATIONS)
            if "normalization" in entries else "dimensionless")
    options = SpectrumOptions(include_thermal=thermal, normalization=norm)
    sweep = _build_sweep(entries, params, options, default_axis)
    fmt = _choice("format", entries["format"], FORMATS) if "format" in entries else "csv"
    output = entries["output"][1] if "output" in entries else None
    return RunConfig(params=params, sweep=sweep, options=options, output=output,
                     format=fmt, preset=preset)
