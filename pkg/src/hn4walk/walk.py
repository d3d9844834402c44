"""
Coined discrete-time quantum walk search on HN4-augmented rings and tori.

States are real arrays of shape ``(vertex_count, coin_dim)``; flattening in C
order gives the vertex-major amplitude vector (``index = vertex * d + coin``).
Every coin and shift used here is a real orthogonal matrix and the initial
state is real, so real storage is exact. It is a representation choice, not a
restriction on the physics.

Coin basis
----------
1D: 0 right, 1 left, 2 long-range right, 3 long-range left, [4 self-loop]
2D: 0 right, 1 left, 2 up, 3 down, 4/5 long-range x right/left,
    6/7 long-range y up/down, [8 self-loop]

In 2D, vertex ``(vx; vy)`` lives at row ``(vy - 1) * side + (vx - 1)``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .topology import DomainError, LatticeSpec, long_range_table

__all__ = [
    "CoinKind",
    "CoinSpec",
    "MarkedSet",
    "TimeSeries",
    "NumericalIntegrityError",
    "Walk",
    "base_degree",
    "coin_dim",
    "seed_coin",
    "diffusion",
    "shift_permutation",
    "build_initial_state",
    "apply_shift",
    "apply_coin",
    "step",
    "evolve",
    "success_probability",
    "default_t_max",
]


class NumericalIntegrityError(RuntimeError):
    """A probability left [0, 1] or the norm drifted: the evolution is corrupt."""


class CoinKind(str, enum.Enum):
    GROVER = "grover"
    SKW = "skw"
    LACKADAISICAL = "lackadaisical"
    MODIFIED_G = "modified-g"

    @property
    def has_loop(self) -> bool:
        return self in (CoinKind.LACKADAISICAL, CoinKind.MODIFIED_G)


@dataclass(frozen=True)
class CoinSpec:
    """Coin family plus self-loop weight ``l``.

    ``loop_weight`` may be a float or a :class:`fractions.Fraction`; Grover and
    SKW walks carry no self-loop and require ``l == 0``.
    """

    kind: CoinKind
    loop_weight: Union[float, Fraction] = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CoinKind(self.kind))
        if self.loop_weight < 0:
            raise ValueError(f"loop weight must be >= 0, got {self.loop_weight}")
        if not self.kind.has_loop and self.loop_weight != 0:
            raise ValueError(f"{self.kind.value} coin has no self-loop; got l={self.loop_weight}")

    @property
    def l(self) -> float:
        return float(self.loop_weight)


Vertex = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class MarkedSet:
    """Distinct marked vertices: labels in 1D, ``(vx, vy)`` label pairs in 2D."""

    vertices: tuple

    def __init__(self, vertices: Iterable[Vertex]):
        vs = tuple(tuple(int(c) for c in v) if isinstance(v, (tuple, list)) else int(v)
                   for v in vertices)
        if not vs:
            raise ValueError("marked set must not be empty")
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate marked vertices in {vs}")
        object.__setattr__(self, "vertices", vs)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def indices(self, lattice: LatticeSpec) -> np.ndarray:
        """0-based state rows of the marked vertices; validates bounds."""
        side = lattice.side
        rows = []
        for v in self.vertices:
            if lattice.dim == 1:
                if isinstance(v, tuple):
                    raise DomainError(f"1D lattice needs integer labels, got {v}")
                if not 1 <= v <= side:
                    raise DomainError(f"marked vertex {v} outside [1, {side}]")
                rows.append(v - 1)
            else:
                if not (isinstance(v, tuple) and len(v) == 2):
                    raise DomainError(f"2D lattice needs (vx, vy) pairs, got {v!r}")
                vx, vy = v
                if not (1 <= vx <= side and 1 <= vy <= side):
                    raise DomainError(f"marked vertex {v} outside [1, {side}]^2")
                rows.append((vy - 1) * side + (vx - 1))
        return np.asarray(rows, dtype=np.intp)


@dataclass
class TimeSeries:
    lattice: LatticeSpec
    coin: CoinSpec
    marked: MarkedSet
    probs: np.ndarray = field(repr=False)

    @property
    def steps(self) -> np.ndarray:
        return np.arange(len(self.probs))

    @property
    def t_max(self) -> int:
        return len(self.probs) - 1


def base_degree(dim: int) -> int:
    return 4 * dim


def coin_dim(lattice: LatticeSpec, coin: CoinSpec) -> int:
    return base_degree(lattice.dim) + int(coin.kind.has_loop)


def seed_coin(dim: int, l: float = 0.0, with_loop: bool = False) -> np.ndarray:
    """Normalized uniform coin state, with ``sqrt(l)`` on the self-loop slot if present."""
    d0 = base_degree(dim)
    s = np.ones(d0 + int(with_loop))
    if with_loop:
        s[-1] = math.sqrt(l)
    return s / math.sqrt(d0 + (l if with_loop else 0.0))


def diffusion(dim: int, l: float = 0.0, with_loop: bool = False) -> np.ndarray:
    """Dense Grover diffusion ``2|s><s| - I`` for the given coin space."""
    s = seed_coin(dim, l, with_loop)
    return 2.0 * np.outer(s, s) - np.eye(len(s))


@lru_cache(maxsize=64)
def shift_permutation(lattice: LatticeSpec, d: int) -> np.ndarray:
    """Gather indices of the flip-flop shift: ``shifted = flat[perm]``.

    The shift is an involution, so the scatter map and the gather map coincide;
    this is checked when the table is built.
    """
    n, side = lattice.n, lattice.side
    prev_lr, next_lr = long_range_table(n)
    axis = np.arange(side)
    right, left = (axis + 1) % side, (axis - 1) % side
    dest = np.empty((lattice.vertex_count, d), dtype=np.intp)

    if lattice.dim == 1:
        v = axis
        dest[:, 0] = right * d + 1
        dest[:, 1] = left * d + 0
        dest[:, 2] = next_lr * d + 3
        dest[:, 3] = prev_lr * d + 2
    else:
        vy, vx = np.divmod(np.arange(lattice.vertex_count), side)
        row = lambda x, y: y * side + x  # noqa: E731
        dest[:, 0] = row(right[vx], vy) * d + 1
        dest[:, 1] = row(left[vx], vy) * d + 0
        dest[:, 2] = row(vx, right[vy]) * d + 3
        dest[:, 3] = row(vx, left[vy]) * d + 2
        dest[:, 4] = row(next_lr[vx], vy) * d + 5
        dest[:, 5] = row(prev_lr[vx], vy) * d + 4
        dest[:, 6] = row(vx, next_lr[vy]) * d + 7
        dest[:, 7] = row(vx, prev_lr[vy]) * d + 6
        v = np.arange(lattice.vertex_count)
    if d == base_degree(lattice.dim) + 1:
        dest[:, -1] = v * d + d - 1
    elif d != base_degree(lattice.dim):
        raise ValueError(f"coin dimension {d} invalid for a {lattice.dim}D lattice")

    dest = dest.ravel()
    perm = np.empty_like(dest)
    perm[dest] = np.arange(dest.size)
    if not np.array_equal(perm, dest):
        raise AssertionError("flip-flop shift table is not an involution")
    perm.setflags(write=False)
    return perm


class Walk:
    """Evolution operator ``U = S C`` for one (lattice, coin, marked set).

    Construction precomputes the shift permutation and the marked rows; calls
    to :meth:`step` are then pure array operations.
    """

    def __init__(self, lattice: LatticeSpec, coin: CoinSpec, marked: MarkedSet):
        self.lattice = lattice
        self.coin = coin
        self.marked = marked
        self.rows = marked.indices(lattice)
        self.d = coin_dim(lattice, coin)
        self.seed = seed_coin(lattice.dim, coin.l, coin.kind.has_loop)
        self.perm = shift_permutation(lattice, self.d)
        if coin.kind is CoinKind.MODIFIED_G and coin.l == 0:
            warnings.warn("modified-g coin with l = 0 never populates the self-loop; "
                          "the walk reduces to plain diffusion", RuntimeWarning, stacklevel=2)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.lattice.vertex_count, self.d)

    def _check(self, psi: np.ndarray) -> None:
        if psi.shape != self.shape:
            raise ValueError(f"state shape {psi.shape} does not match {self.shape}")

    def initial_state(self) -> np.ndarray:
        psi = np.tile(self.seed, (self.lattice.vertex_count, 1))
        return psi / math.sqrt(self.lattice.vertex_count)

    def diffuse(self, psi: np.ndarray) -> np.ndarray:
        s = self.seed
        return 2.0 * np.outer(psi @ s, s) - psi

    def coin_step(self, psi: np.ndarray) -> np.ndarray:
        self._check(psi)
        out = self.diffuse(psi)
        m = self.rows
        kind = self.coin.kind
        if kind is CoinKind.GROVER or kind is CoinKind.LACKADAISICAL:
            out[m] = -out[m]
        elif kind is CoinKind.SKW:
            out[m] = -psi[m]
        else:
            flipped = psi[m].copy()
            flipped[:, -1] = -flipped[:, -1]
            out[m] = self.diffuse(flipped)
        return out

    def shift(self, psi: np.ndarray) -> np.ndarray:
        self._check(psi)
        return psi.reshape(-1)[self.perm].reshape(self.shape)

    def step(self, psi: np.ndarray) -> np.ndarray:
        return self.shift(self.coin_step(psi))

    def success_probability(self, psi: np.ndarray) -> float:
        marked = psi[self.rows]
        return float(np.einsum("ij,ij->", marked, marked))

    def evolve(self, t_max: int, psi: np.ndarray | None = None) -> TimeSeries:
        """Success probability after ``0..t_max`` steps from ``psi`` (default: uniform)."""
        if t_max < 0:
            raise ValueError(f"t_max must be >= 0, got {t_max}")
        psi = self.initial_state() if psi is None else psi
        probs = np.empty(t_max + 1)
        probs[0] = self.success_probability(psi)
        for t in range(1, t_max + 1):
            psi = self.step(psi)
            probs[t] = self.success_probability(psi)
        if not np.all(np.isfinite(probs)) or probs.min() < 0.0 or probs.max() > 1.0 + 1e-9:
            raise NumericalIntegrityError(
                f"success probability left [0, 1]: min={probs.min()!r} max={probs.max()!r}")
        return TimeSeries(self.lattice, self.coin, self.marked, probs)


def default_t_max(lattice: LatticeSpec) -> int:
    n_vertices = lattice.vertex_count
    return 4 * math.ceil(math.sqrt(n_vertices * math.log(n_vertices)))


# Functional surface. Each call builds a Walk; use the class directly in loops.

def build_initial_state(lattice: LatticeSpec, coin: CoinSpec) -> np.ndarray:
    s = seed_coin(lattice.dim, coin.l, coin.kind.has_loop)
    return np.tile(s, (lattice.vertex_count, 1)) / math.sqrt(lattice.vertex_count)


def apply_shift(state: np.ndarray, lattice: LatticeSpec) -> np.ndarray:
    if state.ndim != 2 or state.shape[0] != lattice.vertex_count:
        raise ValueError(f"state shape {state.shape} does not fit {lattice}")
    perm = shift_permutation(lattice, state.shape[1])
    return state.reshape(-1)[perm].reshape(state.shape)


def apply_coin(state: np.ndarray, lattice: LatticeSpec, coin: CoinSpec,
               marked: MarkedSet) -> np.ndarray:
    return Walk(lattice, coin, marked).coin_step(state)


def step(state: np.ndarray, lattice: LatticeSpec, coin: CoinSpec,
         marked: MarkedSet) -> np.ndarray:
    return Walk(lattice, coin, marked).step(state)


def evolve(state: np.ndarray | None, t_max: int, lattice: LatticeSpec, coin: CoinSpec,
           marked: MarkedSet) -> TimeSeries:
    return Walk(lattice, coin, marked).evolve(t_max, state)


def success_probability(state: np.ndarray, marked: MarkedSet, lattice: LatticeSpec) -> float:
    rows = marked.indices(lattice)
    return float(np.sum(state[rows] ** 2))
