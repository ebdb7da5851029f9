import copy
import json

import pytest

from binwalk.fbgrid import MeasurementModel
from binwalk.scenario import ConfigError, list_presets, load_config, load_preset, parse_config
from binwalk.walk import Cycle, Hypercube, Line

BASE = {
    "version": 1,
    "name": "toy",
    "topology": {"kind": "cycle", "x_min": -3, "x_max": 3},
    "coin": {"kind": "hadamard"},
    "initial_state": {"kind": "localized", "coin": 0, "position": 0},
    "steps": [1, 2, 5],
}


def with_(path, value):
    cfg = copy.deepcopy(BASE)
    node = cfg
    *head, last = path
    for k in head:
        node = node[k]
    node[last] = value
    return cfg


def test_minimal():
    cfg = parse_config(BASE)
    assert cfg.topology == Cycle(-3, 3)
    assert cfg.measurement.is_ideal
    assert cfg.steps == (1, 2, 5)
    assert cfg.seed is None


def test_presets():
    assert list_presets() == ["circle-hadamard", "hypercube-grover", "line-nonmixing"]
    assert load_preset("hypercube-grover").topology == Hypercube(4)
    assert load_preset("hypercube-grover").steps == tuple(range(1, 13))
    assert load_preset("circle-hadamard").topology.dim == 42
    assert load_preset("circle-hadamard").steps[-1] == 400
    line = load_preset("line-nonmixing")
    assert line.topology == Line(-5, 5) and line.topology.dim == 22
    with pytest.raises(ConfigError):
        load_preset("nope")


@pytest.mark.parametrize(
    "cfg, path",
    [
        ({**BASE, "extra": 1}, "$.extra"),
        (with_(["topology", "radius"], 3), "$.topology.radius"),
        (with_(["version"], 2), "$.version"),
        (with_(["steps"], [2, 2]), "$.steps"),
        (with_(["steps"], [-1, 2]), "$.steps"),
        (with_(["steps"], [1, "2"]), "$.steps[1]"),
        (with_(["coin"], {"kind": "grover", "dim": 3}), "$.coin"),
        (with_(["coin", "kind"], "fourier"), "$.coin.kind"),
        (with_(["initial_state", "position"], 9), "$.initial_state"),
        (with_(["measurement"], {"kind": "noisy", "crosstalk": 0.7, "shots": 10}), "$.measurement"),
        (with_(["measurement"], {"kind": "noisy", "shots": 10, "seeed": 1}), "$.measurement.seeed"),
        (with_(["outputs"], ["pdf"]), "$.outputs[0]"),
        (with_(["grid"], {"n_bins": 8}), "$.grid.n_bins"),
        (with_(["topology"], {"kind": "line", "x_min": 2, "x_max": 1}), "$.topology"),
    ],
)
def test_errors_name_the_field(cfg, path):
    with pytest.raises(ConfigError) as err:
        parse_config(cfg)
    assert err.value.path == path


def test_custom_coin_and_complex_amplitudes():
    cfg = with_(["coin"], {"kind": "custom", "matrix": [[0, [0, 1]], [[0, 1], 0]]})
    cfg["initial_state"] = {
        "kind": "position_superposition",
        "coin": 1,
        "terms": [{"position": 0, "amplitude": [0, 1]}, {"position": 1, "amplitude": 1}],
    }
    parsed = parse_config(cfg)
    assert parsed.coin.kind == "custom"
    assert parsed.initial_state["terms"][0] == (0, 1j)


def test_noisy_and_seed_override():
    cfg = parse_config(with_(["measurement"], {"kind": "noisy", "crosstalk": 0.02, "shots": 100, "seed": 4}))
    assert cfg.measurement == MeasurementModel(0.02, 100, 4)
    seeded = cfg.with_seed(99)
    assert seeded.seed == 99
    assert seeded.config_hash() != cfg.config_hash()
    assert cfg.config_hash() == parse_config(json.loads(json.dumps(cfg.raw))).config_hash()


def test_load_config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(BASE))
    assert load_config(p).name == "toy"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.json")
