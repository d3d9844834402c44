"""
HN4 hierarchical coordinates and long-range neighbor structure.

Every vertex label ``1 <= v <= 2**n`` on one axis factors uniquely as
``v = 2**i * (2*j + 1)``: ``i`` is its level in the hierarchy and ``j`` its
position within that level. Long-range edges join consecutive vertices of the
same level; each level ``i <= n-2`` is closed into a ring. Levels ``n-1`` and
``n`` hold a single vertex each (``2**(n-1)`` and ``2**n``), whose long-range
edge folds back onto itself as a directed self-loop.

Vertex labels are 1-based everywhere in the public API. Array indices used by
the walk engine are 0-based with ``index = label - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

__all__ = [
    "DomainError",
    "LatticeSpec",
    "Hn4Coord",
    "Regular",
    "DirectedSelfLoop",
    "AxisNeighbor",
    "to_hn4",
    "from_hn4",
    "level_size",
    "long_range_neighbors",
    "is_directed_selfloop",
    "long_range_table",
]


class DomainError(ValueError):
    """An argument lies outside the domain of an HN4 coordinate function."""


@dataclass(frozen=True)
class LatticeSpec:
    """Ring (``dim=1``) or torus (``dim=2``) of side ``2**n`` with HN4 edges on every axis."""

    dim: int
    n: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError(f"dim must be 1 or 2, got {self.dim!r}")
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise DomainError(f"n must be an integer, got {self.n!r}")
        if self.n < 2:
            # n = 1 makes every vertex a directed self-loop
            raise DomainError(f"n must be >= 2, got {self.n}")

    @property
    def side(self) -> int:
        return 2 ** self.n

    @property
    def vertex_count(self) -> int:
        return self.side ** self.dim


@dataclass(frozen=True)
class Hn4Coord:
    level: int
    index: int


@dataclass(frozen=True)
class Regular:
    """Long-range neighbors of a vertex on a level ring of size >= 2."""

    prev: int
    next: int


@dataclass(frozen=True)
class DirectedSelfLoop:
    """The long-range edge of this vertex returns to the vertex itself."""


AxisNeighbor = Union[Regular, DirectedSelfLoop]


def _check_label(v: int, n: int) -> None:
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 1 <= v <= 2 ** n:
        raise DomainError(f"vertex label {v} outside [1, {2 ** n}]")


def to_hn4(v: int, n: int) -> Hn4Coord:
    """Return the ``(level, index)`` pair with ``v = 2**level * (2*index + 1)``.

    The top label ``v = 2**n`` maps to ``(n, 0)``.
    """
    _check_label(v, n)
    v = int(v)
    level = (v & -v).bit_length() - 1
    return Hn4Coord(level, ((v >> level) - 1) // 2)


def level_size(i: int, n: int) -> int:
    """Number of vertices on level ``i`` of an axis of side ``2**n``."""
    if not 0 <= i <= n:
        raise DomainError(f"level {i} outside [0, {n}]")
    if i == n:
        return 1
    return 2 ** (n - i - 1)


def from_hn4(c: Hn4Coord, n: int) -> int:
    """Inverse of :func:`to_hn4`."""
    size = level_size(c.level, n)
    if not 0 <= c.index < size:
        raise DomainError(f"index {c.index} outside [0, {size - 1}] on level {c.level}")
    return 2 ** c.level * (2 * c.index + 1)


def is_directed_selfloop(v: int, n: int) -> bool:
    _check_label(v, n)
    return v == 2 ** (n - 1) or v == 2 ** n


def long_range_neighbors(v: int, n: int) -> AxisNeighbor:
    """Previous and next vertex on the level ring of ``v``.

    Index arithmetic wraps modulo the level size, so every level is a ring.
    """
    c = to_hn4(v, n)
    size = level_size(c.level, n)
    if size == 1:
        return DirectedSelfLoop()
    return Regular(
        prev=from_hn4(Hn4Coord(c.level, (c.index - 1) % size), n),
        next=from_hn4(Hn4Coord(c.level, (c.index + 1) % size), n),
    )


@lru_cache(maxsize=None)
def long_range_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based ``(prev, next)`` index arrays for one axis.

    A directed self-loop vertex is its own prev and next.
    """
    side = 2 ** n
    prev = np.empty(side, dtype=np.intp)
    nxt = np.empty(side, dtype=np.intp)
    for v in range(1, side + 1):
        nb = long_range_neighbors(v, n)
        if isinstance(nb, DirectedSelfLoop):
            prev[v - 1] = nxt[v - 1] = v - 1
        else:
            prev[v - 1] = nb.prev - 1
            nxt[v - 1] = nb.next - 1
    prev.setflags(write=False)
    nxt.setflags(write=False)
    return prev, nxt
