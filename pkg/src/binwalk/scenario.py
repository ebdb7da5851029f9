"""
Scenario configuration: strict JSON parsing and built-in presets.

A scenario file looks like::

    {
      "version": 1,
      "name": "circle-hadamard",
      "topology": {"kind": "cycle", "x_min": -10, "x_max": 10},
      "coin": {"kind": "hadamard"},
      "initial_state": {"kind": "localized", "coin": 0, "position": 0},
      "steps": [4, 8, 12],
      "measurement": {"kind": "noisy", "crosstalk": 0.02, "shots": 10000, "seed": 7},
      "grid": {"n_bins": 64},
      "outputs": ["csv", "json", "svg"]
    }

Unknown keys anywhere are rejected, and every error names the offending path.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .fbgrid import BinGrid, MeasurementModel
from .walk import Coin, Cycle, Hypercube, Line, Topology, make_initial_state

__all__ = [
    "CONFIG_VERSION",
    "ConfigError",
    "ScenarioConfig",
    "parse_config",
    "load_config",
    "list_presets",
    "load_preset",
]

CONFIG_VERSION = 1
OUTPUT_KINDS = ("csv", "json", "svg", "masks")


class ConfigError(ValueError):
    """Invalid scenario configuration; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    topology: Topology
    coin: Coin
    initial_state: dict
    steps: tuple[int, ...]
    measurement: MeasurementModel = field(default_factory=MeasurementModel)
    grid: BinGrid = field(default_factory=BinGrid)
    outputs: tuple[str, ...] = ("csv", "json")
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def seed(self) -> int | None:
        return None if self.measurement.shots is None else self.measurement.seed

    def with_seed(self, seed: int) -> "ScenarioConfig":
        raw = json.loads(json.dumps(self.raw))
        raw.setdefault("measurement", {"kind": "ideal"})["seed"] = seed
        return replace(self, measurement=replace(self.measurement, seed=seed), raw=raw)

    def with_measurement(self, model: MeasurementModel) -> "ScenarioConfig":
        raw = json.loads(json.dumps(self.raw))
        raw["measurement"] = _measurement_to_raw(model)
        return replace(self, measurement=model, raw=raw)

    def config_hash(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


def _measurement_to_raw(model: MeasurementModel) -> dict:
    if model.is_ideal:
        return {"kind": "ideal"}
    out: dict[str, Any] = {"kind": "noisy", "crosstalk": model.crosstalk, "seed": model.seed}
    if model.shots is not None:
        out["shots"] = model.shots
    return out


def _obj(value: Any, path: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(path, f"expected an object, got {type(value).__name__}")
    unknown = set(value) - required - optional
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}", "unknown field")
    missing = required - set(value)
    if missing:
        raise ConfigError(f"{path}.{sorted(missing)[0]}", "missing required field")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return value


def _num(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _complex(value: Any, path: str) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise ConfigError(path, "complex numbers are written as [re, im]")
        return complex(_num(value[0], f"{path}[0]"), _num(value[1], f"{path}[1]"))
    return complex(_num(value, path))


def _parse_topology(value: Any, path: str) -> Topology:
    kind = _obj(value, path, {"kind"}, {"x_min", "x_max", "dim"})["kind"]
    try:
        if kind in ("line", "cycle"):
            _obj(value, path, {"kind", "x_min", "x_max"})
            cls = Line if kind == "line" else Cycle
            return cls(_int(value["x_min"], f"{path}.x_min"), _int(value["x_max"], f"{path}.x_max"))
        if kind == "hypercube":
            _obj(value, path, {"kind", "dim"})
            return Hypercube(_int(value["dim"], f"{path}.dim"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.kind", f"unknown topology {kind!r}")


def _parse_coin(value: Any, path: str, topology: Topology) -> Coin:
    v = _obj(value, path, {"kind"}, {"dim", "matrix"})
    kind = v["kind"]
    if kind == "hadamard":
        _obj(v, path, {"kind"})
        coin = Coin.hadamard()
    elif kind in ("grover", "identity"):
        _obj(v, path, {"kind"}, {"dim"})
        dim = _int(v.get("dim", topology.d_c), f"{path}.dim")
        coin = Coin(kind, dim)
    elif kind == "custom":
        _obj(v, path, {"kind", "matrix"})
        rows = v["matrix"]
        if not isinstance(rows, list):
            raise ConfigError(f"{path}.matrix", "expected a list of rows")
        m = [
            [_complex(z, f"{path}.matrix[{i}][{j}]") for j, z in enumerate(row)]
            for i, row in enumerate(rows)
        ]
        coin = Coin.custom(m)
    else:
        raise ConfigError(f"{path}.kind", f"unknown coin {kind!r}")
    if coin.dim != topology.d_c:
        raise ConfigError(path, f"coin dimension {coin.dim} does not match d_c = {topology.d_c}")
    return coin


def _parse_initial(value: Any, path: str, topology: Topology) -> dict:
    v = _obj(value, path, {"kind"}, {"coin", "position", "terms"})
    kind = v["kind"]
    if kind == "localized":
        _obj(v, path, {"kind", "coin", "position"})
        params = {"coin": _int(v["coin"], f"{path}.coin"), "position": _int(v["position"], f"{path}.position")}
    elif kind == "coin_uniform":
        _obj(v, path, {"kind", "position"})
        params = {"position": _int(v["position"], f"{path}.position")}
    elif kind == "position_superposition":
        _obj(v, path, {"kind", "coin", "terms"})
        if not isinstance(v["terms"], list) or not v["terms"]:
            raise ConfigError(f"{path}.terms", "expected a non-empty list")
        terms = []
        for i, t in enumerate(v["terms"]):
            tp = f"{path}.terms[{i}]"
            _obj(t, tp, {"position", "amplitude"})
            terms.append((_int(t["position"], f"{tp}.position"), _complex(t["amplitude"], f"{tp}.amplitude")))
        params = {"coin": _int(v["coin"], f"{path}.coin"), "terms": terms}
    else:
        raise ConfigError(f"{path}.kind", f"unknown initial state {kind!r}")

    try:
        make_initial_state(topology, kind, **params)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None
    return {"kind": kind, **params}


def _parse_measurement(value: Any, path: str) -> MeasurementModel:
    v = _obj(value, path, {"kind"}, {"crosstalk", "shots", "seed"})
    if v["kind"] == "ideal":
        _obj(v, path, {"kind"}, {"seed"})
        return MeasurementModel(seed=_int(v.get("seed", 0), f"{path}.seed"))
    if v["kind"] != "noisy":
        raise ConfigError(f"{path}.kind", f"unknown measurement model {v['kind']!r}")
    shots = v.get("shots")
    try:
        return MeasurementModel(
            crosstalk=_num(v.get("crosstalk", 0.0), f"{path}.crosstalk"),
            shots=None if shots is None else _int(shots, f"{path}.shots"),
            seed=_int(v.get("seed", 0), f"{path}.seed"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def _parse_grid(value: Any, path: str) -> BinGrid:
    names = {"n_bins", "bin_width_ghz", "guard_band_ghz", "center_thz",
             "signal_resolution_ghz", "pump_resolution_ghz"}
    v = _obj(value, path, set(), names)
    kwargs: dict[str, Any] = {}
    for k, x in v.items():
        kwargs[k] = _int(x, f"{path}.{k}") if k == "n_bins" else _num(x, f"{path}.{k}")
    try:
        return BinGrid(**kwargs)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def parse_config(data: Any) -> ScenarioConfig:
    """Validate a decoded JSON document and build a :class:`ScenarioConfig`."""
    top = _obj(
        data, "$",
        {"version", "name", "topology", "coin", "initial_state", "steps"},
        {"measurement", "grid", "outputs"},
    )
    if top["version"] != CONFIG_VERSION:
        raise ConfigError("$.version", f"unsupported version {top['version']!r}")
    if not isinstance(top["name"], str) or not top["name"]:
        raise ConfigError("$.name", "expected a non-empty string")

    topology = _parse_topology(top["topology"], "$.topology")
    coin = _parse_coin(top["coin"], "$.coin", topology)
    initial = _parse_initial(top["initial_state"], "$.initial_state", topology)

    steps = top["steps"]
    if not isinstance(steps, list) or not steps:
        raise ConfigError("$.steps", "expected a non-empty list of step counts")
    steps = tuple(_int(n, f"$.steps[{i}]") for i, n in enumerate(steps))
    if steps[0] < 0 or any(b <= a for a, b in zip(steps, steps[1:])):
        raise ConfigError("$.steps", "steps must be non-negative and strictly increasing")

    measurement = _parse_measurement(top.get("measurement", {"kind": "ideal"}), "$.measurement")
    grid = _parse_grid(top.get("grid", {}), "$.grid")
    if topology.dim > grid.n_bins:
        raise ConfigError("$.grid.n_bins", f"walk dimension {topology.dim} exceeds {grid.n_bins} bins")

    outputs = top.get("outputs", ["csv", "json"])
    if not isinstance(outputs, list):
        raise ConfigError("$.outputs", "expected a list")
    for i, o in enumerate(outputs):
        if o not in OUTPUT_KINDS:
            raise ConfigError(f"$.outputs[{i}]", f"unknown output {o!r}; choose from {OUTPUT_KINDS}")

    return ScenarioConfig(
        name=top["name"],
        topology=topology,
        coin=coin,
        initial_state=initial,
        steps=steps,
        measurement=measurement,
        grid=grid,
        outputs=tuple(outputs),
        raw=json.loads(json.dumps(data)),
    )


def load_config(path: str | Path) -> ScenarioConfig:
    """Read and parse a scenario file. Raises ``OSError`` or :class:`ConfigError`."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from None
    return parse_config(data)


def list_presets() -> list[str]:
    files = resources.files("binwalk.presets").iterdir()
    return sorted(p.name[:-5] for p in files if p.name.endswith(".json"))


def load_preset(name: str) -> ScenarioConfig:
    if name not in list_presets():
        raise ConfigError("--preset", f"unknown preset {name!r}; available: {list_presets()}")
    text = resources.files("binwalk.presets").joinpath(f"{name}.json").read_text()
    return parse_config(json.loads(text))


def initial_state(config: ScenarioConfig) -> np.ndarray:
    params = dict(config.initial_state)
    return make_initial_state(config.topology, params.pop("kind"), **params)
