"""
Dense reference operators for tiny lattices.

Two independent routes to the same matrix:

* :func:`build_dense` applies the structured :class:`~hn4walk.walk.Walk` step
  to each basis vector (column ``k`` is ``U e_k``).
* :func:`explicit_operator` writes out ``S`` edge by edge from hand-written
  long-range tables (``n <= 3``) or plain label arithmetic, and ``C`` as a block
  diagonal of coin matrices. It shares no code with the walk engine.

Agreement of the two is the ground truth for the engine.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topology import LatticeSpec
from .walk import CoinKind, CoinSpec, MarkedSet, Walk

__all__ = [
    "MAX_DENSE_DIM",
    "OracleSizeError",
    "DenseOperator",
    "build_dense",
    "explicit_operator",
    "unit_eigenspace",
    "projection_norm_sq",
    "span_residual",
]

MAX_DENSE_DIM = 4096

# next long-range neighbor per 1-based label; prev is the inverse map
_LR_NEXT = {
    2: {1: 3, 2: 2, 3: 1, 4: 4},
    3: {1: 3, 3: 5, 5: 7, 7: 1, 2: 6, 6: 2, 4: 4, 8: 8},
}


class OracleSizeError(ValueError):
    pass


@dataclass
class DenseOperator:
    matrix: np.ndarray
    lattice: LatticeSpec
    coin: CoinSpec
    marked: MarkedSet


def _lr_next(n: int) -> dict[int, int]:
    if n in _LR_NEXT:
        return _LR_NEXT[n]
    side = 2 ** n
    table = {}
    for v in range(1, side + 1):
        if v in (side // 2, side):
            table[v] = v
        else:
            stride = 2 * (v & -v)
            table[v] = (v - 1 + stride) % side + 1
    return table


def _guard(lattice: LatticeSpec, coin: CoinSpec) -> int:
    d = 4 * lattice.dim + (1 if coin.kind in (CoinKind.LACKADAISICAL, CoinKind.MODIFIED_G) else 0)
    size = d * lattice.vertex_count
    if size > MAX_DENSE_DIM:
        raise OracleSizeError(f"dense operator of dimension {size} exceeds {MAX_DENSE_DIM}")
    return d


def build_dense(lattice: LatticeSpec, coin: CoinSpec, marked: MarkedSet) -> DenseOperator:
    """Materialize the structured evolution operator column by column."""
    d = _guard(lattice, coin)
    walk = Walk(lattice, coin, marked)
    size = d * lattice.vertex_count
    u = np.empty((size, size))
    e = np.zeros(size)
    for k in range(size):
        e[k] = 1.0
        u[:, k] = walk.step(e.reshape(walk.shape)).reshape(-1)
        e[k] = 0.0
    return DenseOperator(u, lattice, coin, marked)


def explicit_operator(lattice: LatticeSpec, coin: CoinSpec, marked: MarkedSet) -> DenseOperator:
    """``S @ C`` assembled from edge lists and coin blocks."""
    d = _guard(lattice, coin)
    side, n_vertices = lattice.side, lattice.vertex_count
    size = d * n_vertices
    nxt = _lr_next(lattice.n)
    prv = {w: v for v, w in nxt.items()}
    up = lambda v: v % side + 1  # noqa: E731
    down = lambda v: (v - 2) % side + 1  # noqa: E731

    def row(v) -> int:
        if lattice.dim == 1:
            return v - 1
        vx, vy = v
        return (vy - 1) * side + (vx - 1)

    # (coin, move, coin after the flip-flop) per edge direction
    if lattice.dim == 1:
        vertices = list(range(1, side + 1))
        moves = [(0, up, 1), (1, down, 0), (2, nxt.__getitem__, 3), (3, prv.__getitem__, 2)]
    else:
        vertices = [(x, y) for y in range(1, side + 1) for x in range(1, side + 1)]
        moves = [
            (0, lambda v: (up(v[0]), v[1]), 1),
            (1, lambda v: (down(v[0]), v[1]), 0),
            (2, lambda v: (v[0], up(v[1])), 3),
            (3, lambda v: (v[0], down(v[1])), 2),
            (4, lambda v: (nxt[v[0]], v[1]), 5),
            (5, lambda v: (prv[v[0]], v[1]), 4),
            (6, lambda v: (v[0], nxt[v[1]]), 7),
            (7, lambda v: (v[0], prv[v[1]]), 6),
        ]

    d0 = 4 * lattice.dim
    s = np.zeros((size, size))
    for v in vertices:
        for c, move, c2 in moves:
            s[row(move(v)) * d + c2, row(v) * d + c] = 1.0
        if d > d0:
            s[row(v) * d + d0, row(v) * d + d0] = 1.0

    l = float(coin.loop_weight)
    weights = np.ones(d)
    if d > d0:
        weights[-1] = np.sqrt(l)
    weights /= np.sqrt(d0 + (l if d > d0 else 0.0))
    diff = 2.0 * np.outer(weights, weights) - np.eye(d)

    if coin.kind in (CoinKind.GROVER, CoinKind.LACKADAISICAL):
        marked_block = -diff
    elif coin.kind is CoinKind.SKW:
        marked_block = -np.eye(d)
    else:
        flip = np.eye(d)
        flip[-1, -1] = -1.0
        marked_block = diff @ flip

    marked_rows = {row(v) for v in marked}
    c = np.zeros((size, size))
    for r in range(n_vertices):
        block = marked_block if r in marked_rows else diff
        c[r * d:(r + 1) * d, r * d:(r + 1) * d] = block
    return DenseOperator(s @ c, lattice, coin, marked)


def unit_eigenspace(op, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (rows) of ``{x : U x = x}``.

    For orthogonal ``U`` the singular values of ``U - I`` are ``|lambda - 1|``,
    so the null space is read off an SVD with cutoff ``tol``.
    """
    u = op.matrix if isinstance(op, DenseOperator) else np.asarray(op)
    if u.shape[0] > MAX_DENSE_DIM:
        raise OracleSizeError(f"dense operator of dimension {u.shape[0]} exceeds {MAX_DENSE_DIM}")
    _, sv, vh = np.linalg.svd(u - np.eye(u.shape[0]))
    return vh[sv <= tol]


def projection_norm_sq(basis: np.ndarray, psi: np.ndarray) -> float:
    coeffs = basis @ psi.reshape(-1)
    return float(coeffs @ coeffs)


def span_residual(basis: np.ndarray, psi: np.ndarray) -> float:
    """Relative distance of ``psi`` from the row span of ``basis``."""
    v = psi.reshape(-1)
    rest = v - basis.T @ (basis @ v)
    return float(np.linalg.norm(rest) / np.linalg.norm(v))
