"""
Rotated projective measurements.

Instead of evolving the state and measuring in the mode basis, each rank-1
projector ``|t⟩⟨t|`` is rotated to ``U†|t⟩⟨t|U`` and the *initial* state is
projected onto it. Both routes give identical Born-rule statistics;
:func:`forward_reference` implements the conventional route so the two can be
checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .walk import ModeIndex, Topology, evolve

__all__ = [
    "CLAMP_BELOW",
    "PovmElement",
    "ModeDistribution",
    "PositionDistribution",
    "rotated_povm_element",
    "rotated_povm",
    "coin_resolved_probabilities",
    "position_distribution",
    "forward_reference",
]

CLAMP_BELOW = 1e-15


@dataclass(frozen=True)
class PovmElement:
    """Rotated measurement vector ``m = U†|target⟩``; outcome probability is ``|⟨m|ψ⟩|²``."""

    target: ModeIndex
    vector: NDArray[np.complex128]

    def probability(self, psi: ArrayLike) -> float:
        return float(abs(np.vdot(self.vector, psi)) ** 2)


@dataclass(frozen=True)
class ModeDistribution:
    """Coin-resolved outcome probabilities, indexed by flat mode index."""

    topology: Topology
    probs: NDArray[np.float64]

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.shape != (self.topology.dim,):
            raise ValueError(
                f"expected {self.topology.dim} probabilities, got shape {p.shape}"
            )
        if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0 + 1e-12):
            raise ValueError("mode probabilities must be finite and lie in [0, 1]")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def __getitem__(self, mode: ModeIndex) -> float:
        return float(self.probs[mode.flat])

    def coin_mass(self, coin: int) -> float:
        return float(self.probs.reshape(self.topology.d_x, self.topology.d_c)[:, coin].sum())

    def as_table(self) -> NDArray[np.float64]:
        """Probabilities reshaped to ``(d_x, d_c)``: rows are positions, columns coins."""
        return self.probs.reshape(self.topology.d_x, self.topology.d_c)


@dataclass(frozen=True)
class PositionDistribution:
    positions: NDArray[np.int64]
    probs: NDArray[np.float64]

    def __getitem__(self, position: int) -> float:
        idx = np.flatnonzero(self.positions == position)
        if idx.size == 0:
            raise KeyError(position)
        return float(self.probs[idx[0]])

    def support(self, tol: float = 0.0) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.positions, self.probs) if p > tol}


def _clamp(p: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.where(p < CLAMP_BELOW, 0.0, p)


def rotated_povm_element(U: ArrayLike, target: ModeIndex) -> PovmElement:
    """Return the measurement vector ``conj(U[target.flat, :])``."""
    U = np.asarray(U, dtype=np.complex128)
    if not 0 <= target.flat < U.shape[0]:
        raise IndexError(f"target flat index {target.flat} outside [0, {U.shape[0]})")
    vec = U[target.flat].conj()
    vec.flags.writeable = False
    return PovmElement(target, vec)


def rotated_povm(U: ArrayLike, topology: Topology) -> list[PovmElement]:
    """One rotated element per output mode, in flat order."""
    return [rotated_povm_element(U, t) for t in topology.modes()]


def coin_resolved_probabilities(
    U: ArrayLike, psi: ArrayLike, topology: Topology
) -> ModeDistribution:
    """Project ``psi`` onto every rotated POVM element in turn."""
    U = np.asarray(U, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    if U.shape != (topology.dim, topology.dim) or psi.shape != (topology.dim,):
        raise ValueError(
            f"dimension mismatch: U {U.shape}, psi {psi.shape}, d = {topology.dim}"
        )
    p = np.array([el.probability(psi) for el in rotated_povm(U, topology)])
    return ModeDistribution(topology, _clamp(p))


def forward_reference(U: ArrayLike, psi: ArrayLike, topology: Topology) -> ModeDistribution:
    """Evolve first, then measure in the original mode basis."""
    out = evolve(U, psi)
    if out.shape != (topology.dim,):
        raise ValueError(f"dimension mismatch: state has {out.shape[0]}, d = {topology.dim}")
    return ModeDistribution(topology, _clamp(np.abs(out) ** 2))


def position_distribution(dist: ModeDistribution) -> PositionDistribution:
    """Trace out the coin: ``P(x) = Σ_c p(c, x)``."""
    P = dist.as_table().sum(axis=1)
    P.flags.writeable = False
    return PositionDistribution(dist.topology.positions, P)
