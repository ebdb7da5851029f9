"""
Exit criteria. Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are
repeated in the terminal summary (see conftest.py).

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import contextlib
import json
import time
from dataclasses import replace

import numpy as np
import pytest

from binwalk.efficiency import crossover_steps, required_step_efficiency
from binwalk.export import compare_files, export_results, write_masks
from binwalk.fbgrid import MeasurementModel, read_mask_csv
from binwalk.measurement import coin_resolved_probabilities, forward_reference
from binwalk.metrics import bhattacharyya
from binwalk.runner import run_scenario, walk_unitaries
from binwalk.scenario import initial_state, list_presets, load_preset

from conftest import topology_of_dim
from oracles import random_state, random_unitary

RESULTS: dict[str, bool] = {}


@contextlib.contextmanager
def criterion(label):
    try:
        yield
    except BaseException:
        RESULTS[label] = False
        print(f"[FAIL] {label}")
        raise
    RESULTS[label] = True
    print(f"[PASS] {label}")


def ideal(name):
    return load_preset(name).with_measurement(MeasurementModel.ideal())


def test_ac1_hypercube_revival():
    with criterion("AC1 hypercube revival at n=12, P(0,n)=1 within 1e-10, <1s"):
        t0 = time.perf_counter()
        res = run_scenario(ideal("hypercube-grover"))
        elapsed = time.perf_counter() - t0
        assert res.step(12).theory[0] == pytest.approx(1.0, abs=1e-10)
        for n in range(1, 12):
            assert res.step(n).theory[0] < 1 - 1e-6
        assert elapsed < 1.0


def test_ac2_rotated_equals_forward():
    with criterion("AC2 rotated vs forward probabilities agree to 1e-12 (>=100 unitaries)"):
        rng = np.random.default_rng(2)
        worst, count = 0.0, 0
        for d in (2, 4, 8, 16):
            t = topology_of_dim(d)
            for _ in range(30):
                U, psi = random_unitary(d, rng), random_state(d, rng)
                rot = coin_resolved_probabilities(U, psi, t).probs
                fwd = forward_reference(U, psi, t).probs
                worst = max(worst, float(np.max(np.abs(rot - fwd))))
                count += 1
        assert count >= 100
        assert worst <= 1e-12


def test_ac3_nonmixing_endpoint():
    with criterion("AC3 non-mixing walk n=400: P(1)=0.375, P(4)=0.625, no coin-1 mass"):
        res = run_scenario(ideal("line-nonmixing"))
        s = res.step(400)
        support = s.theory.support()
        assert sorted(support) == [1, 4]
        assert support[1] == pytest.approx(0.375, abs=1e-12)
        assert support[4] == pytest.approx(0.625, abs=1e-12)
        assert s.theory_modes.coin_mass(1) == 0.0


def test_ac4_circle_scale():
    with criterion("AC4 circle walk d=42 to n=400: unitary to 1e-10, normalized, <10s"):
        cfg = replace(ideal("circle-hadamard"), steps=tuple(range(1, 401)))
        assert cfg.topology.dim == 42
        t0 = time.perf_counter()
        res = run_scenario(cfg)
        elapsed = time.perf_counter() - t0
        assert len(res.steps) == 400
        for s in res.steps:
            assert s.unitarity_deviation <= 1e-10
            assert s.theory.probs.sum() == pytest.approx(1, abs=1e-9)
            assert s.theory_modes.probs.sum() == pytest.approx(1, abs=1e-9)
        assert elapsed < 10.0


def test_ac5_efficiency():
    with criterion("AC5 crossover(0.8, 1e-4)=42; required(400, 1e-4)=0.9772+-5e-4"):
        assert crossover_steps(0.8, 1e-4) == 42
        assert required_step_efficiency(400, 1e-4) == pytest.approx(0.9772, abs=5e-4)


def test_ac6_metric_properties():
    with criterion("AC6 Bhattacharyya identity/disjoint/symmetry/bounds; noiseless mean = 1"):
        rng = np.random.default_rng(6)
        for _ in range(1000):
            k = int(rng.integers(2, 40))
            P, Q = rng.dirichlet(np.ones(k)), rng.dirichlet(np.ones(k) * 0.3)
            s = bhattacharyya(P, Q)
            assert 0.0 <= s <= 1.0
            assert s == bhattacharyya(Q, P)
            assert bhattacharyya(P, P) == pytest.approx(1, abs=1e-12)
            mask = rng.random(k) < 0.5
            if mask.any() and (~mask).any():
                A, B = np.where(mask, P, 0), np.where(mask, 0, Q)
                assert bhattacharyya(A / A.sum(), B / B.sum()) == 0.0
        for name in list_presets():
            assert run_scenario(ideal(name)).report.mean == pytest.approx(1.0, abs=1e-9)


def test_ac7_noise_model():
    with criterion("AC7 circle preset k=0.02, Ns=1e4: mean S in (0.9,1); rises with Ns=1e6 (10 seeds)"):
        base = load_preset("circle-hadamard")
        assert base.measurement == replace(base.measurement, crosstalk=0.02, shots=10**4)
        S = run_scenario(base).report.mean
        assert 0.9 < S < 1.0

        def mean_over_seeds(shots):
            vals = []
            for seed in range(10):
                cfg = base.with_measurement(MeasurementModel(0.02, shots, 1000 + seed))
                vals.append(run_scenario(cfg).report.mean)
            return float(np.mean(vals))

        low, mid, high = (mean_over_seeds(n) for n in (10**4, 10**5, 10**6))
        print(f"    mean S over 10 seeds: Ns=1e4 {low:.6f}, 1e5 {mid:.6f}, 1e6 {high:.6f}")
        assert low < mid < high < 1.0


def test_ac8_determinism_and_round_trip(tmp_path):
    with criterion("AC8 presets byte-identical on rerun; compare_files reproduces S_n to 1e-9"):
        for name in list_presets():
            cfg = load_preset(name)
            a, b = tmp_path / name / "a", tmp_path / name / "b"
            fa = export_results(run_scenario(cfg), a, ["csv", "json", "svg"])
            fb = export_results(run_scenario(cfg), b, ["csv", "json", "svg"])
            for pa, pb in zip(fa, fb):
                assert pa.read_bytes() == pb.read_bytes(), pa.name
            summary = json.loads((a / "summary.json").read_text())
            rep = compare_files(a / "positions.csv")
            assert rep.steps == [s["n"] for s in summary["steps"]]
            for got, s in zip(rep.values, summary["steps"]):
                assert abs(got - s["S"]) <= 1e-9
            assert abs(rep.mean - summary["mean_similarity"]) <= 1e-9


def test_ac9_mask_correctness(tmp_path):
    with criterion("AC9 hypercube n=6 masks re-project to 1e-12; sum amp^2 = 1 within 1e-10"):
        cfg = ideal("hypercube-grover")
        t, grid = cfg.topology, cfg.grid
        U = walk_unitaries(replace(cfg, steps=(6,)))[6]
        psi = initial_state(cfg)
        p = coin_resolved_probabilities(U, psi, t).probs
        paths = write_masks(cfg, tmp_path, steps=[6])
        assert len(paths) == t.dim
        off = (grid.n_bins - t.dim) // 2
        for target, path in zip(t.modes(), paths):
            w = read_mask_csv(path)
            assert abs(float(np.sum(np.abs(w) ** 2)) - 1.0) <= 1e-10
            v = w[off : off + t.dim]
            assert abs(abs(np.vdot(v, psi)) ** 2 - p[target.flat]) <= 1e-12
