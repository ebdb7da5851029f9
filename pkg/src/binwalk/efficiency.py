"""
Loss scaling of sequential meshes versus a fixed-efficiency single projection.

A sequential architecture transmits ``eta`` per step, so ``eta**n`` after ``n``
steps; the projection approach has one end-to-end efficiency regardless of the
implemented unitary.
"""

from __future__ import annotations

import math

__all__ = ["crossover_steps", "required_step_efficiency", "mesh_component_count"]


def _check_open_unit(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")


def crossover_steps(eta: float, total: float) -> int:
    """
    Smallest ``n`` with ``eta**n < total``.

    Equality does not count as a win: ``crossover_steps(0.5, 0.5) == 2``.
    """
    _check_open_unit("eta", eta)
    _check_open_unit("total", total)
    n = max(1, math.ceil(math.log(total) / math.log(eta)))
    # guard both directions against log rounding
    while eta**n >= total:
        n += 1
    while n > 1 and eta ** (n - 1) < total:
        n -= 1
    return n


def required_step_efficiency(n: int, total: float) -> float:
    """Per-step efficiency whose ``n``-th power equals ``total``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_open_unit("total", total)
    return total ** (1.0 / n)


def mesh_component_count(d: int) -> int:
    """Two-mode couplers in a minimal Reck/Clements mesh for a ``d × d`` unitary."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return d * (d - 1) // 2
