"""Distribution similarity measures."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "SimilarityReport",
    "bhattacharyya",
    "mean_similarity",
    "total_variation",
]

_NORM_SLACK = 1e-6
_NEG_SLACK = 1e-12


def _prepare(P: ArrayLike, Q: ArrayLike) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    P = np.asarray(P, dtype=np.float64).ravel()
    Q = np.asarray(Q, dtype=np.float64).ravel()
    if P.shape != Q.shape:
        raise ValueError(f"length mismatch: {P.size} vs {Q.size}")
    out = []
    for name, v in (("P", P), ("Q", Q)):
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{name} contains non-finite entries")
        if np.any(v < -_NEG_SLACK):
            raise ValueError(f"{name} has negative entries (min {v.min():.3e})")
        v = np.clip(v, 0.0, None)
        total = v.sum()
        if abs(total - 1.0) > _NORM_SLACK:
            raise ValueError(f"{name} is not normalized (sum = {total:.9f})")
        out.append(v / total)
    return out[0], out[1]


def bhattacharyya(P: ArrayLike, Q: ArrayLike) -> float:
    """
    Bhattacharyya coefficient ``Σ √(P_i Q_i)``.

    Both inputs are renormalized if their sums are within 1e-6 of one;
    anything further off is rejected. The result lies in ``[0, 1]``: one for
    identical distributions, zero for disjoint supports.
    """
    P, Q = _prepare(P, Q)
    return float(min(1.0, np.sqrt(P * Q).sum()))


def total_variation(P: ArrayLike, Q: ArrayLike) -> float:
    """Total-variation distance ``½ Σ |P_i − Q_i|``."""
    P, Q = _prepare(P, Q)
    return float(0.5 * np.abs(P - Q).sum())


def mean_similarity(values: Sequence[float]) -> float:
    """Arithmetic mean of per-step similarities."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot average an empty list of similarities")
    if np.any(v < 0.0) or np.any(v > 1.0):
        raise ValueError("similarities must lie in [0, 1]")
    return float(v.mean())


@dataclass
class SimilarityReport:
    """Per-step similarity ``S_n`` and their mean."""

    steps: list[int]
    values: list[float]
    scenario: str = ""
    seed: int | None = None
    mean: float = field(init=False)

    def __post_init__(self):
        if len(self.steps) != len(self.values):
            raise ValueError("steps and values differ in length")
        self.mean = mean_similarity(self.values)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["step_range"] = [min(self.steps), max(self.steps)]
        return d
