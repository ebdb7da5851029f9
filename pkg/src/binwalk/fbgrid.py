"""
Frequency-bin layout, pump masks, and the detection imperfection model.

Modes of a walk are laid onto a contiguous, centered block of bins. A pump
mask programs one rotated projector: bin ``k`` carries the complex weight
``conj(U[target, k])`` in polar form.

Imperfections are lumped into two knobs: nearest-neighbour crosstalk between
adjacent bins and Poisson shot noise per detection mode.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .measurement import ModeDistribution
from .walk import ModeIndex, Topology

__all__ = [
    "SPEED_OF_LIGHT",
    "DEFAULT_CENTER_THZ",
    "BinGrid",
    "MaskBin",
    "PumpMask",
    "MeasurementModel",
    "CountRecord",
    "bin_center",
    "mode_to_bin",
    "compile_mask",
    "write_mask_csv",
    "read_mask_csv",
    "apply_crosstalk",
    "sample_counts",
    "counter_stream",
]

SPEED_OF_LIGHT = 299_792_458.0  # m/s
DEFAULT_CENTER_THZ = round(SPEED_OF_LIGHT / 1540e-9 / 1e12, 5)

MASK_HEADER = ("bin_index", "frequency_thz", "amplitude", "phase_rad")


@dataclass(frozen=True)
class BinGrid:
    """Equally spaced frequency bins separated by guard bands."""

    n_bins: int = 64
    bin_width_ghz: float = 40.0
    guard_band_ghz: float = 36.0
    center_thz: float = DEFAULT_CENTER_THZ
    signal_resolution_ghz: float = 10.0
    pump_resolution_ghz: float = 20.0

    def __post_init__(self):
        if self.n_bins < 1:
            raise ValueError(f"n_bins must be >= 1, got {self.n_bins}")
        if self.bin_width_ghz <= 0:
            raise ValueError(f"bin_width_ghz must be > 0, got {self.bin_width_ghz}")
        if self.guard_band_ghz < 0:
            raise ValueError(f"guard_band_ghz must be >= 0, got {self.guard_band_ghz}")
        finest = max(self.signal_resolution_ghz, self.pump_resolution_ghz)
        if self.bin_width_ghz < finest:
            raise ValueError(
                f"bin width {self.bin_width_ghz} GHz is below the shaper "
                f"resolution of {finest} GHz"
            )

    @property
    def pitch_ghz(self) -> float:
        return self.bin_width_ghz + self.guard_band_ghz


def bin_center(grid: BinGrid, k: int) -> float:
    """Center frequency of bin ``k`` in THz."""
    if not 0 <= k < grid.n_bins:
        raise IndexError(f"bin {k} outside [0, {grid.n_bins})")
    return grid.center_thz + (k - (grid.n_bins - 1) / 2) * grid.pitch_ghz * 1e-3


def _offset(d: int, grid: BinGrid) -> int:
    if d > grid.n_bins:
        raise ValueError(f"walk dimension {d} does not fit on {grid.n_bins} bins")
    return (grid.n_bins - d) // 2


def mode_to_bin(topology: Topology, target: ModeIndex, grid: BinGrid) -> int:
    """Bin carrying flat mode ``target``; the walk occupies a centered block."""
    return target.flat + _offset(topology.dim, grid)


class MaskBin(NamedTuple):
    bin_index: int
    frequency_thz: float
    amplitude: float
    phase_rad: float


@dataclass(frozen=True)
class PumpMask:
    target: ModeIndex
    bins: tuple[MaskBin, ...]

    def __post_init__(self):
        norm = sum(b.amplitude**2 for b in self.bins)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"mask power sums to {norm:.12f}, expected 1")

    def weights(self) -> NDArray[np.complex128]:
        """Complex per-bin weights ``a·e^{iφ}``, indexed by bin."""
        w = np.zeros(len(self.bins), dtype=np.complex128)
        for b in self.bins:
            w[b.bin_index] = b.amplitude * np.exp(1j * b.phase_rad)
        return w

    def mode_vector(self, topology: Topology, grid: BinGrid) -> NDArray[np.complex128]:
        """Read the mask back as a rotated measurement vector over flat modes."""
        off = _offset(topology.dim, grid)
        return self.weights()[off : off + topology.dim]

    def nonzero_bins(self) -> list[int]:
        return [b.bin_index for b in self.bins if b.amplitude > 0.0]


def _phase(z: complex) -> float:
    phi = math.atan2(z.imag, z.real) + 0.0  # no signed zero
    # keep phases in (−π, π]
    return math.pi if phi <= -math.pi else phi


def compile_mask(U: ArrayLike, target: ModeIndex, grid: BinGrid, topology: Topology) -> PumpMask:
    """Pump mask projecting onto the rotated element for ``target``."""
    U = np.asarray(U, dtype=np.complex128)
    off = _offset(topology.dim, grid)
    if not 0 <= target.flat < U.shape[0]:
        raise IndexError(f"target flat index {target.flat} outside [0, {U.shape[0]})")
    row = U[target.flat].conj()
    bins = []
    for k in range(grid.n_bins):
        j = k - off
        z = complex(row[j]) if 0 <= j < topology.dim else 0j
        amp = abs(z)
        bins.append(MaskBin(k, bin_center(grid, k), amp, _phase(z) if amp > 0 else 0.0))
    return PumpMask(target, tuple(bins))


def write_mask_csv(mask: PumpMask, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MASK_HEADER)
        for b in mask.bins:
            w.writerow(
                [b.bin_index, f"{b.frequency_thz:.5f}", f"{b.amplitude:.12g}", f"{b.phase_rad:.12g}"]
            )
    return path


def read_mask_csv(path: str | Path) -> NDArray[np.complex128]:
    """Return the per-bin complex weights stored in a mask CSV."""
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != MASK_HEADER:
            raise ValueError(f"unexpected mask header {reader.fieldnames}")
        rows = list(reader)
    w = np.zeros(len(rows), dtype=np.complex128)
    for r in rows:
        w[int(r["bin_index"])] = float(r["amplitude"]) * np.exp(1j * float(r["phase_rad"]))
    return w


@dataclass(frozen=True)
class MeasurementModel:
    """
    Detection model.

    ``shots=None`` means exact probabilities (no sampling). With
    ``crosstalk == 0`` and ``shots is None`` the model is ideal.
    """

    crosstalk: float = 0.0
    shots: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.crosstalk < 0.5:
            raise ValueError(f"crosstalk must lie in [0, 0.5), got {self.crosstalk}")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be a positive integer, got {self.shots}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @classmethod
    def ideal(cls) -> "MeasurementModel":
        return cls()

    @classmethod
    def noisy(cls, crosstalk: float, shots: int, seed: int) -> "MeasurementModel":
        return cls(crosstalk, shots, seed)

    @property
    def is_ideal(self) -> bool:
        return self.crosstalk == 0.0 and self.shots is None


@dataclass(frozen=True)
class CountRecord:
    counts: NDArray[np.int64]
    shots: int
    seed: int
    stream: int = 0
    probabilities: NDArray[np.float64] = field(init=False)

    def __post_init__(self):
        total = int(self.counts.sum())
        p = self.counts / total if total > 0 else np.zeros(self.counts.shape)
        object.__setattr__(self, "probabilities", p)

    @property
    def empty(self) -> bool:
        return int(self.counts.sum()) == 0


def apply_crosstalk(dist: ModeDistribution, model: MeasurementModel) -> ModeDistribution:
    """
    Leak a fraction ``κ/2`` of each mode into each adjacent mode.

    Adjacent flat indices sit in adjacent bins, so this is a nearest-neighbour
    kernel over bins. At the ends the share with nowhere to go stays put,
    which keeps the total probability unchanged.
    """
    k = model.crosstalk
    if not 0.0 <= k < 0.5:
        raise ValueError(f"crosstalk must lie in [0, 0.5), got {k}")
    p = dist.probs
    if k == 0.0:
        return dist
    leak = 0.5 * k * p
    out = (1.0 - k) * p
    out[1:] += leak[:-1]
    out[:-1] += leak[1:]
    out[0] += leak[0]
    out[-1] += leak[-1]
    return ModeDistribution(dist.topology, out)


def counter_stream(seed: int, flat: int, stream: int = 0) -> np.random.Generator:
    """
    Independent generator for one detection mode.

    Philox is counter-based: the key ``(seed, stream‖flat)`` fixes the whole
    stream, so the order in which modes are sampled never matters.
    """
    if not 0 <= flat < 2**32 or not 0 <= stream < 2**32:
        raise ValueError("flat index and stream id must fit in 32 bits")
    key = np.array([seed, (stream << 32) | flat], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_counts(
    dist: ModeDistribution | ArrayLike, model: MeasurementModel, stream: int = 0
) -> CountRecord:
    """
    Draw Poisson(``shots · p_t``) counts independently for every mode ``t``.

    ``stream`` separates repeated acquisitions under one seed (the runner uses
    the step number).
    """
    if model.shots is None:
        raise ValueError("sampling needs a finite shot count; model has shots=None")
    p = dist.probs if isinstance(dist, ModeDistribution) else np.asarray(dist, float)
    counts = np.array(
        [counter_stream(model.seed, t, stream).poisson(model.shots * pt) for t, pt in enumerate(p)],
        dtype=np.int64,
    )
    return CountRecord(counts, model.shots, model.seed, stream)

