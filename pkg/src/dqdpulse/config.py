"""Flat key-value run configuration.

Format: one ``key = value`` per line, ``#`` starts a comment, blank lines
ignored.  Numbers may carry an SI-style unit suffix (``1.3ns``, ``50ueV``,
``2.62GHz``); the suffix must match the key's unit.  Every key is
optional; omitted keys fall back to the defaults of the measured
parameter set at T = 1.3 ns.  Unknown keys are rejected with the full
list of valid keys, so typos fail loudly instead of silently running a
default.
"""

import dataclasses
import math
import os
import re

from .errors import ConfigError, InvalidParameterError
from .hybrid_model import HybridParams
from .propagation import TimeGrid
from .tbqcp import OptimizerConfig

__all__ = ["RunConfig", "load_config", "parse_config_text", "GATE_NAMES", "VALID_KEYS"]

#: Canonical gate set, in report order.
GATE_NAMES = ("UFT", "P1", "P2", "P3", "P4", "P5", "P6", "UFTdag")

# default grid density: steps per ns of pulse duration (dt = 0.1 ps)
_STEPS_PER_NS = 10000

_OPT_DEFAULTS = {f.name: f.default for f in dataclasses.fields(OptimizerConfig)}

# key -> (unit or None, parser kind)
_KEY_SPECS = {
    "delta1": ("GHz", float),
    "delta2": ("GHz", float),
    "delta3": ("GHz", float),
    "delta4": ("GHz", float),
    "delta_el": ("GHz", float),
    "delta_er": ("GHz", float),
    "eps0": ("ueV", float),
    "t_final": ("ns", float),
    "n_steps": (None, int),
    "eta": (None, float),
    "max_iterations": (None, int),
    "fluctuation_window": (None, int),
    "target_infidelity": (None, float),
    "eta_backoff_limit": (None, int),
    "infidelity_goal": (None, float),
    "gate_list": (None, str),
    "output_dir": (None, str),
    "workers": (None, str),
    "field_sign": (None, float),
    "spectrum_window": (None, str),
    "sweep_eps_min": ("ueV", float),
    "sweep_eps_max": ("ueV", float),
    "sweep_points": (None, int),
}

VALID_KEYS = tuple(sorted(_KEY_SPECS))

_NUMBER_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-z]*)$")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Everything a batch run needs; built by :func:`load_config`."""

    params: HybridParams
    grid: TimeGrid
    optimizer: OptimizerConfig
    gate_list: tuple
    output_dir: str
    workers: int
    infidelity_goal: float
    field_sign: float
    spectrum_window: str | None
    sweep_eps_min: float
    sweep_eps_max: float
    sweep_points: int


def _parse_number(key: str, text: str, unit: str | None, lineno: int) -> float:
    match = _NUMBER_RE.match(text)
    if not match:
        raise ConfigError(f"value for '{key}' is not a number: {text!r}", line=lineno)
    value, suffix = float(match.group(1)), match.group(2)
    if suffix:
        if unit is None:
            raise ConfigError(
                f"'{key}' takes a bare number, got unit suffix {suffix!r}", line=lineno)
        if suffix.lower() != unit.lower():
            raise ConfigError(
                f"'{key}' expects {unit}, got unit suffix {suffix!r}", line=lineno)
    if not math.isfinite(value):
        raise ConfigError(f"value for '{key}' is not finite", line=lineno)
    return value


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    """Parse config text into a validated :class:`RunConfig`."""
    raw = {}
    lines_by_key = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", line=lineno)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEY_SPECS:
            raise ConfigError(
                f"unknown key '{key}'; valid keys: {', '.join(VALID_KEYS)}",
                line=lineno)
        if key in raw:
            raise ConfigError(f"duplicate key '{key}'", line=lineno)
        if not value:
            raise ConfigError(f"empty value for '{key}'", line=lineno)
        raw[key] = value
        lines_by_key[key] = lineno

    def take(key, default):
        if key not in raw:
            return default
        unit, kind = _KEY_SPECS[key]
        lineno = lines_by_key[key]
        if kind is str:
            return raw[key]
        value = _parse_number(key, raw[key], unit, lineno)
        if kind is int:
            if value != int(value):
                raise ConfigError(f"'{key}' must be an integer", line=lineno)
            return int(value)
        return value

    def range_error(key, message):
        return ConfigError(f"'{key}' {message}", line=lines_by_key.get(key))

    params = HybridParams(
        delta1=take("delta1", 2.62), delta2=take("delta2", 3.50),
        delta3=take("delta3", 4.60), delta4=take("delta4", 1.65),
        delta_el=take("delta_el", 52.7), delta_er=take("delta_er", 9.2),
        eps0=take("eps0", 50.0))

    t_final = take("t_final", 1.3)
    if t_final <= 0:
        raise range_error("t_final", "must be positive")
    n_steps = take("n_steps", int(round(_STEPS_PER_NS * t_final)))
    if n_steps < 1:
        raise range_error("n_steps", "must be >= 1")
    grid = TimeGrid(t_final=t_final, n_steps=n_steps)

    try:
        optimizer = OptimizerConfig(
            grid=grid,
            eta=take("eta", _OPT_DEFAULTS["eta"]),
            max_iterations=take("max_iterations", _OPT_DEFAULTS["max_iterations"]),
            fluctuation_window=take("fluctuation_window",
                                    _OPT_DEFAULTS["fluctuation_window"]),
            target_infidelity=take("target_infidelity",
                                   _OPT_DEFAULTS["target_infidelity"]),
            eta_backoff_limit=take("eta_backoff_limit",
                                   _OPT_DEFAULTS["eta_backoff_limit"]))
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc

    gates_text = take("gate_list", ",".join(GATE_NAMES))
    gate_list = tuple(g.strip() for g in gates_text.split(",") if g.strip())
    if not gate_list:
        raise range_error("gate_list", "must name at least one gate")
    for g in gate_list:
        if g not in GATE_NAMES:
            raise range_error(
                "gate_list", f"contains unknown gate '{g}'; valid: {', '.join(GATE_NAMES)}")
    if len(set(gate_list)) != len(gate_list):
        raise range_error("gate_list", "contains duplicates")

    workers_text = take("workers", "auto")
    if workers_text == "auto":
        workers = os.cpu_count() or 1
    else:
        try:
            workers = int(workers_text)
        except ValueError:
            raise range_error("workers", "must be an integer or 'auto'") from None
        if workers < 1:
            raise range_error("workers", "must be >= 1")

    infidelity_goal = take("infidelity_goal", 5e-4)
    if not (0 < infidelity_goal <= 1):
        raise range_error("infidelity_goal", "must be in (0, 1]")

    field_sign = take("field_sign", 1.0)
    if field_sign not in (1.0, -1.0):
        raise range_error("field_sign", "must be +1 or -1")

    window = take("spectrum_window", "none").lower()
    if window not in ("none", "hann"):
        raise range_error("spectrum_window", "must be 'none' or 'hann'")

    sweep_eps_min = take("sweep_eps_min", -500.0)
    sweep_eps_max = take("sweep_eps_max", 500.0)
    sweep_points = take("sweep_points", 1001)
    if sweep_eps_min > sweep_eps_max:
        raise range_error("sweep_eps_min", "must not exceed sweep_eps_max")
    if sweep_points < 1:
        raise range_error("sweep_points", "must be >= 1")

    return RunConfig(
        params=params, grid=grid, optimizer=optimizer, gate_list=gate_list,
        output_dir=take("output_dir", "out"), workers=workers,
        infidelity_goal=infidelity_goal, field_sign=field_sign,
        spectrum_window=None if window == "none" else window,
        sweep_eps_min=sweep_eps_min, sweep_eps_max=sweep_eps_max,
        sweep_points=sweep_points)


def load_config(path: str | None) -> RunConfig:
    """Read and parse a config file; ``None`` gives the full default config."""
    if path is None:
        return parse_config_text("", source="<defaults>")
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=path)
