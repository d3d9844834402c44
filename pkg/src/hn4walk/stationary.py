"""
Eigenvalue-1 states of the Grover and lackadaisical walks for exceptional
marked-vertex configurations.

Each configuration is described by a small dataclass. A stationary state is the
uniform initial state minus a localized correction

    psi_stat = psi(0) - sqrt((d0 + l) / N) * sum_k w_k |c_k> (x) |v_k>,

where ``d0`` is the number of edge directions (4 in 1D, 8 in 2D) and the
``(v_k, c_k, w_k)`` terms depend on the configuration. States are left
unnormalized; residual checks are scale invariant.

The coin states ``psi_cl(0) - sqrt(d0 + l) |c>`` (``helper_coin``) are
orthogonal to ``psi_cl(0)``; they appear in the closed-form action of the SKW
and modified-G walks on these states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .topology import DomainError, LatticeSpec, long_range_neighbors, Regular, to_hn4
from .walk import (
    CoinKind,
    CoinSpec,
    MarkedSet,
    Walk,
    apply_shift,
    base_degree,
    build_initial_state,
    coin_dim,
    diffusion,
    seed_coin,
)

__all__ = [
    "OneDSelfLoop",
    "AdjacentStandard",
    "AdjacentLongRange",
    "OneSelfLoop",
    "TwoSelfLoops",
    "StationaryKind",
    "SuppressionReport",
    "helper_coin",
    "builder_coin",
    "build_stationary",
    "marked_set",
    "correction",
    "correction_norm_sq",
    "residual",
    "predicted_action",
    "suppression_bound_check",
]

Orientation = Literal["horizontal", "vertical"]

# (vertex label, coin index, weight) entries of the subtracted term
Term = tuple[Union[int, tuple[int, int]], int, float]


def _loop_labels(lattice: LatticeSpec) -> tuple[int, int]:
    return lattice.side // 2, lattice.side


def _require_dim(lattice: LatticeSpec, dim: int, name: str) -> None:
    if lattice.dim != dim:
        raise DomainError(f"{name} lives on a {dim}D lattice, got dim={lattice.dim}")


@dataclass(frozen=True)
class OneDSelfLoop:
    """Single marked vertex ``N/2`` or ``N`` on the ring."""

    vertex: int

    def terms(self, lattice: LatticeSpec) -> list[Term]:
        _require_dim(lattice, 1, "OneDSelfLoop")
        if self.vertex not in _loop_labels(lattice):
            raise DomainError(f"vertex {self.vertex} has no directed self-loop")
        return [(self.vertex, 2, 0.5), (self.vertex, 3, 0.5)]

    # prefactor of the helper-coin term in the SKW / modified-G action, times 1/sqrt(N)
    action_prefactor = 1.0


@dataclass(frozen=True)
class AdjacentStandard:
    """Marked pair joined by a standard edge: ``anchor`` and its right (or up) neighbor."""

    orientation: Orientation
    anchor: tuple[int, int]

    def partner(self, lattice: LatticeSpec) -> tuple[int, int]:
        vx, vy = self.anchor
        side = lattice.side
        if self.orientation == "horizontal":
            return (vx % side + 1, vy)
        return (vx, vy % side + 1)

    def terms(self, lattice: LatticeSpec) -> list[Term]:
        _require_dim(lattice, 2, "AdjacentStandard")
        _check_pair(self.anchor, lattice)
        lo, hi = (0, 1) if self.orientation == "horizontal" else (2, 3)
        return [(self.anchor, lo, 1.0), (self.partner(lattice), hi, 1.0)]

    action_prefactor = 2.0


@dataclass(frozen=True)
class AdjacentLongRange:
    """Marked pair joined by a long-range edge: ``anchor`` and the next vertex on its level ring."""

    orientation: Orientation
    anchor: tuple[int, int]

    def partner(self, lattice: LatticeSpec) -> tuple[int, int]:
        vx, vy = self.anchor
        coord = vx if self.orientation == "horizontal" else vy
        nb = long_range_neighbors(coord, lattice.n)
        if not isinstance(nb, Regular):
            raise DomainError(f"coordinate {coord} (level {to_hn4(coord, lattice.n).level}) "
                              "sits on a directed self-loop, not a level ring")
        return (nb.next, vy) if self.orientation == "horizontal" else (vx, nb.next)

    def terms(self, lattice: LatticeSpec) -> list[Term]:
        _require_dim(lattice, 2, "AdjacentLongRange")
        _check_pair(self.anchor, lattice)
        lo, hi = (4, 5) if self.orientation == "horizontal" else (6, 7)
        return [(self.anchor, lo, 1.0), (self.partner(lattice), hi, 1.0)]

    action_prefactor = 2.0


@dataclass(frozen=True)
class OneSelfLoop:
    """Single marked vertex with a directed self-loop along ``axis``.

    ``axis="x"`` marks ``(loop_vertex; other)``, ``axis="y"`` marks
    ``(other; loop_vertex)``.
    """

    axis: Literal["x", "y"]
    loop_vertex: int
    other: int

    @property
    def vertex(self) -> tuple[int, int]:
        if self.axis == "x":
            return (self.loop_vertex, self.other)
        return (self.other, self.loop_vertex)

    def terms(self, lattice: LatticeSpec) -> list[Term]:
        _require_dim(lattice, 2, "OneSelfLoop")
        if self.loop_vertex not in _loop_labels(lattice):
            raise DomainError(f"{self.loop_vertex} has no directed self-loop")
        _check_pair(self.vertex, lattice)
        lo, hi = (4, 5) if self.axis == "x" else (6, 7)
        return [(self.vertex, lo, 0.5), (self.vertex, hi, 0.5)]

    action_prefactor = 1.0


@dataclass(frozen=True)
class TwoSelfLoops:
    """Single marked vertex with directed self-loops on both axes."""

    corner: tuple[int, int]

    def terms(self, lattice: LatticeSpec) -> list[Term]:
        _require_dim(lattice, 2, "TwoSelfLoops")
        loops = _loop_labels(lattice)
        if not all(c in loops for c in self.corner):
            raise DomainError(f"{self.corner} is not a two-self-loop corner")
        return [(self.corner, c, 0.25) for c in (4, 5, 6, 7)]

    action_prefactor = 0.5


StationaryKind = Union[OneDSelfLoop, AdjacentStandard, AdjacentLongRange, OneSelfLoop, TwoSelfLoops]


def _check_pair(v: tuple[int, int], lattice: LatticeSpec) -> None:
    if not all(1 <= c <= lattice.side for c in v):
        raise DomainError(f"vertex {v} outside [1, {lattice.side}]^2")


def marked_set(kind: StationaryKind, lattice: LatticeSpec) -> MarkedSet:
    seen = []
    for v, _, _ in kind.terms(lattice):
        if v not in seen:
            seen.append(v)
    return MarkedSet(seen)


def helper_coin(dim: int, l: float, with_loop: bool, c: int) -> np.ndarray:
    """``psi_cl(0) - sqrt(d0 + l) |c>``; orthogonal to ``psi_cl(0)``."""
    h = seed_coin(dim, l, with_loop)
    h[c] -= math.sqrt(base_degree(dim) + (l if with_loop else 0.0))
    return h


def builder_coin(coin: CoinSpec) -> CoinSpec:
    """Coin whose walk the stationary state is built for, given the evolution coin.

    SKW pairs with the loop-free Grover construction; modified-G with the
    lackadaisical construction at the same ``l``.
    """
    if coin.kind in (CoinKind.GROVER, CoinKind.SKW):
        return CoinSpec(CoinKind.GROVER)
    return CoinSpec(CoinKind.LACKADAISICAL, coin.loop_weight)


def _place(lattice: LatticeSpec, d: int, entries) -> np.ndarray:
    """Scatter ``(vertex, coin-vector)`` pairs into a zero state."""
    out = np.zeros((lattice.vertex_count, d))
    for v, vec in entries:
        row = MarkedSet([v]).indices(lattice)[0]
        out[row] += vec
    return out


def correction(kind: StationaryKind, lattice: LatticeSpec, coin: CoinSpec) -> np.ndarray:
    """The localized term subtracted from ``psi(0)``."""
    d = coin_dim(lattice, coin)
    l = coin.l if coin.kind.has_loop else 0.0
    scale = math.sqrt((base_degree(lattice.dim) + l) / lattice.vertex_count)
    entries = []
    for v, c, w in kind.terms(lattice):
        vec = np.zeros(d)
        vec[c] = scale * w
        entries.append((v, vec))
    return _place(lattice, d, entries)


def correction_norm_sq(kind: StationaryKind, lattice: LatticeSpec, coin: CoinSpec) -> float:
    """Closed form of ``||psi(0) - psi_stat||^2``."""
    l = coin.l if coin.kind.has_loop else 0.0
    weights = sum(w * w for _, _, w in kind.terms(lattice))
    return (base_degree(lattice.dim) + l) * weights / lattice.vertex_count


def build_stationary(kind: StationaryKind, lattice: LatticeSpec, coin: CoinSpec) -> np.ndarray:
    """Unnormalized eigenvalue-1 state of ``S C`` for ``coin`` (Grover or lackadaisical)."""
    if coin.kind not in (CoinKind.GROVER, CoinKind.LACKADAISICAL):
        raise ValueError(f"stationary states are built for grover or lackadaisical coins, "
                         f"not {coin.kind.value}")
    return build_initial_state(lattice, coin) - correction(kind, lattice, coin)


def residual(op, state: np.ndarray) -> float:
    """``||U psi - psi||``; ``op`` is a :class:`Walk`, a dense matrix, or a callable."""
    if isinstance(op, Walk):
        moved = op.step(state)
    elif isinstance(op, np.ndarray):
        moved = (op @ state.reshape(-1)).reshape(state.shape)
    else:
        moved = op(state)
    return float(np.linalg.norm(moved - state))


def predicted_action(kind: StationaryKind, lattice: LatticeSpec, coin: CoinSpec) -> np.ndarray:
    """Closed-form ``U psi_stat`` for the evolution coin ``coin``.

    Grover and lackadaisical leave the state fixed. SKW and modified-G subtract
    a shifted sum of helper coin states at the marked vertices; modified-G also
    subtracts ``2 sqrt(l / (N (d0 + l))) S D_l (|lp> (x) sum_marked |v>)``.
    """
    stat_coin = builder_coin(coin)
    psi = build_stationary(kind, lattice, stat_coin)
    if coin.kind in (CoinKind.GROVER, CoinKind.LACKADAISICAL):
        return psi

    dim, n_vertices = lattice.dim, lattice.vertex_count
    with_loop = coin.kind is CoinKind.MODIFIED_G
    l = coin.l if with_loop else 0.0
    d = coin_dim(lattice, coin)

    helpers = [(v, helper_coin(dim, l, with_loop, c)) for v, c, _ in kind.terms(lattice)]
    shifted = apply_shift(_place(lattice, d, helpers), lattice)
    out = psi - kind.action_prefactor / math.sqrt(n_vertices) * shifted

    if with_loop:
        lp = np.zeros(d)
        lp[-1] = 1.0
        lp_term = diffusion(dim, l, True) @ lp
        marked = marked_set(kind, lattice)
        placed = _place(lattice, d, [(v, lp_term) for v in marked])
        coef = 2.0 * math.sqrt(l / (n_vertices * (base_degree(dim) + l)))
        out = out - coef * apply_shift(placed, lattice)
    return out


@dataclass
class SuppressionReport:
    marked: MarkedSet
    coin: CoinSpec
    p0: float
    max_prob: float
    argmax_t: int
    bound: float
    passed: bool


def suppression_bound_check(target: Union[StationaryKind, MarkedSet], lattice: LatticeSpec,
                            coin: CoinSpec, t_max: int, kappa: float = 10.0) -> SuppressionReport:
    """Evolve from the uniform state and test ``max_t p(t) <= kappa * M / N``.

    A failed bound is reported, not raised.
    """
    marked = target if isinstance(target, MarkedSet) else marked_set(target, lattice)
    series = Walk(lattice, coin, marked).evolve(t_max)
    bound = kappa * len(marked) / lattice.vertex_count
    peak = int(np.argmax(series.probs))
    max_prob = float(series.probs[peak])
    return SuppressionReport(marked, coin, float(series.probs[0]), max_prob, peak, bound,
                             max_prob <= bound)
