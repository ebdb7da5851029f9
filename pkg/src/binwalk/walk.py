"""
Coined discrete-time quantum walks on lines, cycles and hypercubes.

States live in the coin ⊗ position space of dimension ``d = d_x * d_c``. Basis
states are ordered position-major: the flat index of ``|c, x⟩`` is
``position_ordinal(x) * d_c + c``, so each position owns a contiguous block of
``d_c`` coin slots.

All matrices are dense ``complex128`` arrays. Everything returned from this
module is read-only, so results can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "UNITARITY_TOL",
    "NORM_TOL",
    "ModeIndex",
    "Line",
    "Cycle",
    "Hypercube",
    "Topology",
    "Coin",
    "unitarity_deviation",
    "check_unitary",
    "build_coin",
    "build_step_operator",
    "build_step_unitary",
    "compose_walk",
    "compose_sequence",
    "evolve",
    "make_initial_state",
]

UNITARITY_TOL = 1e-10
NORM_TOL = 1e-10

Matrix = NDArray[np.complex128]


class ModeIndex(NamedTuple):
    """One basis mode ``|coin, position⟩`` together with its flat index."""

    coin: int
    position: int
    flat: int


class _TopologyBase:
    d_c: int

    @property
    def positions(self) -> NDArray[np.int64]:
        raise NotImplementedError

    @property
    def d_x(self) -> int:
        return len(self.positions)

    @property
    def dim(self) -> int:
        return self.d_x * self.d_c

    def position_ordinal(self, position: int) -> int:
        raise NotImplementedError

    def mode(self, coin: int, position: int) -> ModeIndex:
        """Return the ``ModeIndex`` for a (coin, position) label pair."""
        if not 0 <= coin < self.d_c:
            raise ValueError(f"coin {coin} outside [0, {self.d_c})")
        ordinal = self.position_ordinal(position)
        return ModeIndex(int(coin), int(position), ordinal * self.d_c + int(coin))

    def mode_from_flat(self, flat: int) -> ModeIndex:
        if not 0 <= flat < self.dim:
            raise ValueError(f"flat index {flat} outside [0, {self.dim})")
        ordinal, coin = divmod(int(flat), self.d_c)
        return ModeIndex(coin, int(self.positions[ordinal]), int(flat))

    def modes(self) -> list[ModeIndex]:
        return [self.mode_from_flat(k) for k in range(self.dim)]


@dataclass(frozen=True)
class _Interval(_TopologyBase):
    x_min: int
    x_max: int

    d_c = 2

    def __post_init__(self):
        if self.x_min >= self.x_max:
            raise ValueError(
                f"need x_min < x_max, got x_min={self.x_min}, x_max={self.x_max}"
            )

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.x_min, self.x_max + 1)

    @property
    def d_x(self) -> int:
        return self.x_max - self.x_min + 1

    def position_ordinal(self, position: int) -> int:
        if not self.x_min <= position <= self.x_max:
            raise ValueError(
                f"position {position} outside [{self.x_min}, {self.x_max}]"
            )
        return int(position) - self.x_min


@dataclass(frozen=True)
class Line(_Interval):
    """Finite line ``x_min … x_max`` with reflecting walls at both ends."""


@dataclass(frozen=True)
class Cycle(_Interval):
    """Ring of positions ``x_min … x_max`` with periodic wrap-around."""


@dataclass(frozen=True)
class Hypercube(_TopologyBase):
    """``dim``-dimensional hypercube; nodes are the integers ``0 … 2**dim - 1``."""

    n_dims: int

    def __post_init__(self):
        if self.n_dims < 1:
            raise ValueError(f"hypercube dimension must be >= 1, got {self.n_dims}")

    @property
    def d_c(self) -> int:  # type: ignore[override]
        return self.n_dims

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(2**self.n_dims)

    @property
    def d_x(self) -> int:
        return 2**self.n_dims

    def position_ordinal(self, position: int) -> int:
        if not 0 <= position < 2**self.n_dims:
            raise ValueError(f"node {position} outside [0, {2**self.n_dims})")
        return int(position)


Topology = Union[Line, Cycle, Hypercube]


@dataclass(frozen=True)
class Coin:
    """
    Declarative coin description.

    ``kind`` is one of ``"hadamard"``, ``"grover"``, ``"identity"`` or
    ``"custom"``. ``dim`` is required for grover/identity; ``matrix`` for custom.
    """

    kind: str
    dim: int | None = None
    matrix: tuple | None = None

    @classmethod
    def hadamard(cls) -> "Coin":
        return cls("hadamard", 2)

    @classmethod
    def grover(cls, dim: int) -> "Coin":
        return cls("grover", dim)

    @classmethod
    def identity(cls, dim: int) -> "Coin":
        return cls("identity", dim)

    @classmethod
    def custom(cls, matrix: ArrayLike) -> "Coin":
        m = np.asarray(matrix, dtype=np.complex128)
        return cls("custom", m.shape[0], tuple(map(tuple, m)))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def unitarity_deviation(U: ArrayLike) -> float:
    """Max-norm of ``U†U − I``."""
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def check_unitary(U: ArrayLike, tol: float = UNITARITY_TOL, what: str = "matrix") -> Matrix:
    """
    Validate that ``U`` is square, finite and unitary to ``tol``.

    Returns the matrix as a read-only ``complex128`` array.

    Raises
    ------
    ValueError
        If ``U`` is not square, contains NaN/Inf, or deviates from unitarity
        by more than ``tol`` (the deviation is reported).
    """
    U = np.array(U, dtype=np.complex128)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"{what} must be square, got shape {U.shape}")
    if not np.all(np.isfinite(U)):
        raise ValueError(f"{what} contains non-finite entries")
    dev = unitarity_deviation(U)
    if dev > tol:
        raise ValueError(
            f"{what} is not unitary: max|U†U - I| = {dev:.3e} exceeds {tol:.1e}"
        )
    return _frozen(U)


def build_coin(spec: Coin) -> Matrix:
    """
    Return the ``d_c × d_c`` coin matrix for ``spec``.

    The Grover coin has entries ``2/d_c - δ_cc'``; the Hadamard coin is
    ``(1/√2)[[1, 1], [1, -1]]``.
    """
    kind = spec.kind.lower()
    if kind == "hadamard":
        C = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
    elif kind in ("grover", "identity"):
        if spec.dim is None or spec.dim < 1:
            raise ValueError(f"{kind} coin requires dim >= 1, got {spec.dim}")
        d = spec.dim
        I = np.eye(d, dtype=np.complex128)
        C = I if kind == "identity" else (2.0 / d) * np.ones((d, d), np.complex128) - I
    elif kind == "custom":
        if spec.matrix is None:
            raise ValueError("custom coin requires a matrix")
        C = np.array(spec.matrix, dtype=np.complex128)
    else:
        raise ValueError(f"unknown coin kind {spec.kind!r}")
    return check_unitary(C, what=f"{kind} coin")


def _shift_target(topology: Topology, coin: int, position: int) -> tuple[int, int]:
    if isinstance(topology, Hypercube):
        return coin, position ^ (1 << coin)
    lo, hi = topology.x_min, topology.x_max
    if isinstance(topology, Cycle):
        span = hi - lo + 1
        step = 1 if coin == 0 else -1
        return coin, (position - lo + step) % span + lo
    if isinstance(topology, Line):
        # the wall swaps the outgoing coin for the ingoing one in place
        if coin == 0:
            return (1, hi) if position == hi else (0, position + 1)
        return (0, lo) if position == lo else (1, position - 1)
    raise TypeError(f"unsupported topology {type(topology).__name__}")


def build_step_operator(topology: Topology) -> Matrix:
    """
    Return the coin-conditioned shift as a ``d × d`` permutation matrix.

    Cycle: coin 0 moves ``x → x+1``, coin 1 moves ``x → x-1`` (mod ``d_x``).
    Line: same, except ``|0, x_max⟩ → |1, x_max⟩`` and ``|1, x_min⟩ → |0, x_min⟩``.
    Hypercube: ``|c, x⟩ → |c, x XOR 2**c⟩``.
    """
    d = topology.dim
    S = np.zeros((d, d), dtype=np.complex128)
    for src in topology.modes():
        c, x = _shift_target(topology, src.coin, src.position)
        S[topology.mode(c, x).flat, src.flat] = 1.0
    return _frozen(S)


def build_step_unitary(coin: ArrayLike, step: ArrayLike, topology: Topology) -> Matrix:
    """Return ``S · (C ⊗ I)`` with the coin acting inside each position block."""
    coin = np.asarray(coin, dtype=np.complex128)
    step = np.asarray(step, dtype=np.complex128)
    if coin.shape != (topology.d_c, topology.d_c):
        raise ValueError(
            f"coin shape {coin.shape} does not match d_c = {topology.d_c}"
        )
    if step.shape != (topology.dim, topology.dim):
        raise ValueError(f"step shape {step.shape} does not match d = {topology.dim}")
    # position-major flat index: the coin is the fast axis, hence I_{d_x} ⊗ C
    coin_full = np.kron(np.eye(topology.d_x), coin)
    return check_unitary(step @ coin_full, what="step unitary")


def compose_walk(step_unitary: ArrayLike, n: int) -> Matrix:
    """Return ``U_step ** n`` by repeated left multiplication."""
    if n < 0:
        raise ValueError(f"step count must be >= 0, got {n}")
    step_unitary = np.asarray(step_unitary, dtype=np.complex128)
    U = np.eye(step_unitary.shape[0], dtype=np.complex128)
    for _ in range(n):
        U = step_unitary @ U
    return _frozen(U)


def compose_sequence(step_unitaries: Sequence[ArrayLike]) -> Matrix:
    """Return ``U_N ··· U_2 U_1`` for per-step unitaries listed in time order."""
    if not step_unitaries:
        raise ValueError("need at least one step unitary")
    U = np.eye(np.shape(step_unitaries[0])[0], dtype=np.complex128)
    for Un in step_unitaries:
        U = np.asarray(Un, dtype=np.complex128) @ U
    return _frozen(U)


def evolve(U: ArrayLike, psi: ArrayLike) -> NDArray[np.complex128]:
    """Apply ``U`` to the state ``psi``."""
    U = np.asarray(U, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    if U.shape[1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: U is {U.shape}, psi has {psi.shape[0]}")
    out = U @ psi
    drift = abs(float(np.vdot(out, out).real) - 1.0)
    if drift > NORM_TOL:
        raise ValueError(f"evolution changed the norm by {drift:.3e}")
    return _frozen(out)


def make_initial_state(topology: Topology, kind: str, **params) -> NDArray[np.complex128]:
    """
    Build a normalized walker state.

    Parameters
    ----------
    topology : Topology
    kind : {"localized", "coin_uniform", "position_superposition"}
        ``localized`` takes ``coin`` and ``position``; ``coin_uniform`` takes
        ``position`` and spreads ``1/√d_c`` over every coin there;
        ``position_superposition`` takes ``terms`` (a list of
        ``(position, amplitude)`` pairs) and ``coin``.

    Raises
    ------
    ValueError
        Out-of-range labels, an unknown kind, or an all-zero amplitude list.
    """
    psi = np.zeros(topology.dim, dtype=np.complex128)
    if kind == "localized":
        psi[topology.mode(params.get("coin", 0), params.get("position", 0)).flat] = 1.0
    elif kind == "coin_uniform":
        x = params.get("position", 0)
        for c in range(topology.d_c):
            psi[topology.mode(c, x).flat] = 1.0 / np.sqrt(topology.d_c)
    elif kind == "position_superposition":
        c = params.get("coin", 0)
        for x, amp in params["terms"]:
            psi[topology.mode(c, x).flat] += complex(amp)
    else:
        raise ValueError(f"unknown initial state kind {kind!r}")

    norm = np.linalg.norm(psi)
    if norm == 0.0 or not np.isfinite(norm):
        raise ValueError("initial state has zero (or non-finite) norm")
    return _frozen(psi / norm)
