"""Evaluate a scenario step by step: theory, simulated detection, similarity."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .fbgrid import CountRecord, apply_crosstalk, sample_counts
from .measurement import (
    ModeDistribution,
    PositionDistribution,
    coin_resolved_probabilities,
    position_distribution,
)
from .metrics import SimilarityReport, bhattacharyya
from .scenario import ScenarioConfig, initial_state
from .walk import (
    UNITARITY_TOL,
    build_coin,
    build_step_operator,
    build_step_unitary,
    compose_walk,
    unitarity_deviation,
)

__all__ = ["StepResult", "RunResult", "step_unitary", "run_scenario", "walk_unitaries"]


@dataclass(frozen=True)
class StepResult:
    n: int
    theory_modes: ModeDistribution
    theory: PositionDistribution
    sim_modes: ModeDistribution | None = None
    sim: PositionDistribution | None = None
    counts: CountRecord | None = None
    unitarity_deviation: float = 0.0

    @property
    def similarity(self) -> float:
        if self.sim is None:
            return bhattacharyya(self.theory.probs, self.theory.probs)
        return bhattacharyya(self.theory.probs, self.sim.probs)


@dataclass(frozen=True)
class RunResult:
    config: ScenarioConfig
    steps: tuple[StepResult, ...]
    report: SimilarityReport
    provenance: dict

    @property
    def simulated(self) -> bool:
        return self.steps[0].sim is not None

    def step(self, n: int) -> StepResult:
        for s in self.steps:
            if s.n == n:
                return s
        raise KeyError(n)


def step_unitary(config: ScenarioConfig) -> np.ndarray:
    coin = build_coin(config.coin)
    return build_step_unitary(coin, build_step_operator(config.topology), config.topology)


def walk_unitaries(config: ScenarioConfig, workers: int = 1) -> dict[int, np.ndarray]:
    """
    Composed walk unitary for every measured step.

    Sequential evaluation walks the step list once, extending the previous
    product; the parallel path composes each step from scratch. Both perform
    the same chain of left multiplications, so the results agree bit for bit.
    """
    U1 = step_unitary(config)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            mats = list(pool.map(lambda n: compose_walk(U1, n), config.steps))
        return dict(zip(config.steps, mats))

    out = {}
    U = np.eye(config.topology.dim, dtype=np.complex128)
    done = 0
    for n in config.steps:
        for _ in range(n - done):
            U = U1 @ U
        done = n
        out[n] = U
    return out


def _evaluate(config: ScenarioConfig, psi: np.ndarray, n: int, U: np.ndarray) -> StepResult:
    dev = unitarity_deviation(U)
    if dev > UNITARITY_TOL:
        raise ArithmeticError(f"walk unitary at step {n} drifted from unitarity by {dev:.3e}")
    theory_modes = coin_resolved_probabilities(U, psi, config.topology)
    theory = position_distribution(theory_modes)
    model = config.measurement
    if model.is_ideal:
        return StepResult(n, theory_modes, theory, unitarity_deviation=dev)

    leaked = apply_crosstalk(theory_modes, model)
    counts = None
    if model.shots is None:
        sim_modes = leaked
    else:
        counts = sample_counts(leaked, model, stream=n)
        if counts.empty:
            raise RuntimeError(f"no counts recorded at step {n}; raise the shot count")
        sim_modes = ModeDistribution(config.topology, counts.probabilities)
    return StepResult(
        n, theory_modes, theory, sim_modes, position_distribution(sim_modes), counts, dev
    )


def run_scenario(config: ScenarioConfig, workers: int = 1) -> RunResult:
    """
    Compute theory and (optionally) simulated distributions for each measured step.

    With a noisy measurement model the theory mode distribution is first
    smeared by crosstalk, then sampled with Poisson shot noise keyed by
    ``(seed, step, mode)``. Similarities compare the two position
    distributions. ``workers > 1`` evaluates steps concurrently; results are
    merged by step index and are identical to a sequential run.
    """
    if config.topology.dim > config.grid.n_bins:
        raise ValueError(
            f"walk dimension {config.topology.dim} exceeds {config.grid.n_bins} bins"
        )
    psi = initial_state(config)
    unitaries = walk_unitaries(config, workers)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            futures = {n: pool.submit(_evaluate, config, psi, n, U) for n, U in unitaries.items()}
            steps = tuple(futures[n].result() for n in config.steps)
    else:
        steps = tuple(_evaluate(config, psi, n, unitaries[n]) for n in config.steps)

    report = SimilarityReport(
        steps=[s.n for s in steps],
        values=[s.similarity for s in steps],
        scenario=config.name,
        seed=config.seed,
    )
    provenance = {
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "version": __version__,
    }
    return RunResult(config, steps, report, provenance)
