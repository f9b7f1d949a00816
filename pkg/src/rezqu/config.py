"""Strict JSON experiment configuration.

Keys carry their units (``f_m_ghz``, ``t_meas_ns``); unknown keys and
wrongly typed values are rejected with the dotted key path.
"""

from __future__ import annotations

import hashlib
import json
import types
import typing
from dataclasses import MISSING, asdict, dataclass, field, fields, is_dataclass
from typing import Literal

from .basis import DeviceParams

EXPERIMENTS = (
    "spectrum",
    "idling-sweep",
    "move-analytic",
    "move-optimize",
    "tail-sweep",
    "lz-estimate",
    "measurement",
    "error-budget",
)


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


@dataclass(frozen=True)
class DeviceBlock:
    f_m_ghz: float = 7.0
    f_b_ghz: float = 6.0
    eta_ghz: float = 0.2
    g_m_ghz: float = 0.025
    g_b_ghz: float = 0.025
    include_gd: bool = False

    def to_params(self, **overrides) -> DeviceParams:
        kw = dict(
            f_m=self.f_m_ghz,
            f_b=self.f_b_ghz,
            eta=self.eta_ghz,
            g_m=self.g_m_ghz,
            g_b=self.g_b_ghz,
            include_gd=self.include_gd,
        )
        kw.update(overrides)
        return DeviceParams(**kw)


@dataclass(frozen=True)
class SpectrumBlock:
    f_q_start_ghz: float = 6.1
    f_q_stop_ghz: float = 6.9
    f_q_step_ghz: float = 0.01


@dataclass(frozen=True)
class IdlingSweepBlock:
    f_q_start_ghz: float = 6.1
    f_q_stop_ghz: float = 6.9
    f_q_step_ghz: float = 0.02
    g_ghz: list[float] = field(default_factory=lambda: [0.025, 0.05])


@dataclass(frozen=True)
class MoveBlock:
    family: Literal["piecewise", "erf"] = "piecewise"
    f_start_ghz: float = 6.7
    f_end_ghz: float = 6.5
    slope2_ghz_per_ns: float = 0.5
    rear_slope_ghz_per_ns: float = 0.5
    sigma_ns: float = 1.0
    margin_sigma: float = 3.0
    direction: Literal["qubit_to_memory", "memory_to_qubit"] = "qubit_to_memory"
    mode: Literal["two_param", "four_param"] = "four_param"
    fixed_front: list[float] | None = None
    n_starts: int = 5
    perturbation: float = 0.05
    max_evals: int = 2000
    tolerance: float = 1e-12
    target_error: float | None = None
    dt_ns: float = 1e-3
    sample_every_ns: float = 0.05


@dataclass(frozen=True)
class TailSweepBlock:
    f_start_ghz: float = 6.5
    f_end_ghz: float = 6.5
    sigma_ns: list[float] = field(default_factory=lambda: [0.35, 0.5, 0.75, 1.0, 1.25, 1.5])
    g_b_ghz: list[float] = field(default_factory=lambda: [0.05, 0.025])
    margin_sigma: float = 3.0
    optimize: bool = True
    n_starts: int = 1
    dt_ns: float = 1e-3


@dataclass(frozen=True)
class LZBlock:
    g_b_ghz: float = 0.025
    g_bk_ghz: float = 0.025
    delta_b_ghz: float = 0.5
    g_mk_ghz: float = 0.025
    delta_mk_ghz: float = 0.5
    sweep_rate_ghz_per_ns: list[float] = field(default_factory=lambda: [0.25, 0.5, 1.0])
    oracle: bool = True


@dataclass(frozen=True)
class MeasurementBlock:
    f_q_ghz: float = 6.5
    gamma_per_ns: float = 1.0
    t_meas_ns: float = 40.0
    dt_ns: float = 1e-3
    sample_every_ns: float = 0.01


@dataclass(frozen=True)
class ErrorBudgetBlock:
    delta_m_ghz: float = 0.5
    delta_b_ghz: float = 0.5
    N: list[int] = field(default_factory=lambda: [1])
    N_op: list[int] = field(default_factory=lambda: [1])
    sweep_rate_ghz_per_ns: float = 0.5


BLOCKS = {
    "spectrum": SpectrumBlock,
    "idling-sweep": IdlingSweepBlock,
    "move-analytic": MoveBlock,
    "move-optimize": MoveBlock,
    "tail-sweep": TailSweepBlock,
    "lz-estimate": LZBlock,
    "measurement": MeasurementBlock,
    "error-budget": ErrorBudgetBlock,
}


@dataclass(frozen=True)
class OutputBlock:
    path: str | None = None
    format: Literal["csv", "json"] = "csv"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    device: DeviceBlock
    params: object
    output: OutputBlock = OutputBlock()
    seed: int = 0
    workers: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


# --------------------------------------------------------------------------
# Strict parsing
# --------------------------------------------------------------------------


def _join(path: str, key) -> str:
    return f"{path}.{key}" if path else str(key)


def _coerce(tp, value, path: str):
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)
    if origin is typing.Union or origin is types.UnionType:
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(inner[0], value, path)
    if origin is Literal:
        if value not in args:
            raise ConfigError(path, f"expected one of {list(args)}, got {value!r}")
        return value
    if origin is list:
        if not isinstance(value, list):
            raise ConfigError(path, f"expected a list, got {type(value).__name__}")
        return [_coerce(args[0], v, f"{path}[{i}]") for i, v in enumerate(value)]
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if is_dataclass(tp):
        return build(tp, value, path)
    raise ConfigError(path, f"unsupported field type {tp}")


def build(cls, data, path: str = ""):
    """Instantiate dataclass ``cls`` from a mapping, rejecting unknown keys."""
    if not isinstance(data, dict):
        raise ConfigError(path, f"expected an object, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    known = {f.name: f for f in fields(cls)}
    for key in data:
        if key not in known:
            raise ConfigError(_join(path, key), "unknown key")
    kwargs = {}
    for name, f in known.items():
        if name in data:
            kwargs[name] = _coerce(hints[name], data[name], _join(path, name))
        elif f.default is MISSING and f.default_factory is MISSING:
            raise ConfigError(_join(path, name), "missing required key")
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from exc


def parse_config(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("", "top level must be an object")
    allowed = {"experiment", "device", "params", "output", "seed", "workers"}
    for key in data:
        if key not in allowed:
            raise ConfigError(key, "unknown key")
    exp = data.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError("experiment", f"expected one of {list(EXPERIMENTS)}, got {exp!r}")
    device = build(DeviceBlock, data.get("device", {}), "device")
    try:
        device.to_params()
    except ValueError as exc:
        raise ConfigError("device", str(exc)) from exc
    params = build(BLOCKS[exp], data.get("params", {}), "params")
    output = build(OutputBlock, data.get("output", {}), "output")
    seed = _coerce(int, data.get("seed", 0), "seed")
    workers = _coerce(int | None, data.get("workers"), "workers")
    if workers is not None and workers < 1:
        raise ConfigError("workers", "must be at least 1")
    return ExperimentConfig(exp, device, params, output, seed, workers)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON: {exc}") from exc
    except OSError as exc:
        raise ConfigError("", f"cannot read config: {exc}") from exc
    return parse_config(data)
