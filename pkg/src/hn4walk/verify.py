"""Self-check suites behind ``hn4walk verify``."""
from __future__ import annotations

import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import walk as _walk
from .oracle import build_dense, explicit_operator
from .stationary import (
    AdjacentLongRange,
    AdjacentStandard,
    OneDSelfLoop,
    OneSelfLoop,
    TwoSelfLoops,
    build_stationary,
    builder_coin,
    marked_set,
    predicted_action,
    residual,
)
from .topology import Hn4Coord, LatticeSpec, from_hn4, to_hn4
from .walk import CoinKind, CoinSpec, MarkedSet, Walk, diffusion

__all__ = ["SuiteResult", "sample_kinds", "run_suites", "SUITES"]


@dataclass
class SuiteResult:
    name: str
    max_residual: float
    tolerance: float
    seconds: float = 0.0
    error: str | None = None

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_residual)) and self.max_residual <= self.tolerance


def sample_kinds(lattice: LatticeSpec) -> list:
    """A spread of stationary configurations, free coordinates swept over 3 values."""
    side = lattice.side
    if lattice.dim == 1:
        return [OneDSelfLoop(side // 2), OneDSelfLoop(side)]
    others = sorted({1, 3, side - 1})
    # level 1 collapses to a self-loop when n == 2
    lr_y = 2 if lattice.n >= 3 else 1
    return [
        AdjacentStandard("horizontal", (1, 1)),
        AdjacentStandard("vertical", (3, side)),
        AdjacentLongRange("horizontal", (1, 2)),
        AdjacentLongRange("vertical", (side - 1, lr_y)),
        *[OneSelfLoop("x", side // 2, o) for o in others],
        *[OneSelfLoop("y", side, o) for o in others],
        TwoSelfLoops((side // 2, side // 2)),
        TwoSelfLoops((side, side // 2)),
    ]


def _coins(lattice: LatticeSpec, l_scale: float = 8.0) -> list[CoinSpec]:
    l = l_scale / lattice.vertex_count
    return [CoinSpec(CoinKind.GROVER), CoinSpec(CoinKind.SKW),
            CoinSpec(CoinKind.LACKADAISICAL, l), CoinSpec(CoinKind.MODIFIED_G, l)]


def _marked_sets(lattice: LatticeSpec) -> list[MarkedSet]:
    side = lattice.side
    if lattice.dim == 1:
        return [MarkedSet([side // 2]), MarkedSet([1, 2]), MarkedSet([3])]
    return [MarkedSet([(1, 1), (2, 1)]), MarkedSet([(side // 2, side // 2)]),
            MarkedSet([(k, k) for k in range(1, side + 1)])]


def suite_bijection(full: bool) -> float:
    bad = 0
    for n in range(1, 11 if full else 7):
        for v in range(1, 2 ** n + 1):
            c = to_hn4(v, n)
            bad += from_hn4(Hn4Coord(c.level, c.index), n) != v
    return float(bad)


def suite_shift_involution(full: bool) -> float:
    lattices = [LatticeSpec(1, 3), LatticeSpec(2, 2)]
    if full:
        lattices += [LatticeSpec(1, 6), LatticeSpec(2, 5)]
    bad = 0
    for lat in lattices:
        for d in (4 * lat.dim, 4 * lat.dim + 1):
            perm = _walk.shift_permutation(lat, d)
            bad += int(np.count_nonzero(perm[perm] != np.arange(perm.size)))
    return float(bad)


def suite_coin_involution(full: bool) -> float:
    worst = 0.0
    for dim in (1, 2):
        for l, loop in ((0.0, False), (0.0, True), (0.125, True), (2.0, True)):
            dmat = diffusion(dim, l, loop)
            worst = max(worst, np.abs(dmat @ dmat - np.eye(len(dmat))).max())
    return worst


def suite_unitarity(full: bool) -> float:
    rng = np.random.default_rng(7)
    lattices = [LatticeSpec(1, 3), LatticeSpec(2, 2)]
    if full:
        lattices += [LatticeSpec(1, 6), LatticeSpec(2, 4)]
    worst = 0.0
    for lat in lattices:
        for coin in _coins(lat):
            for marked in _marked_sets(lat):
                w = Walk(lat, coin, marked)
                for _ in range(10 if full else 3):
                    psi = rng.standard_normal(w.shape)
                    psi /= np.linalg.norm(psi)
                    worst = max(worst, abs(np.linalg.norm(w.step(psi)) - 1.0))
    return worst


def suite_dense_oracle(full: bool) -> float:
    worst = 0.0
    for lat in (LatticeSpec(1, 3), LatticeSpec(2, 2)):
        for coin in _coins(lat):
            for marked in _marked_sets(lat):
                a = build_dense(lat, coin, marked).matrix
                b = explicit_operator(lat, coin, marked).matrix
                worst = max(worst, np.abs(a - b).max())
    return worst


def _stationary_lattices(full: bool) -> list[LatticeSpec]:
    return [LatticeSpec(1, 6), LatticeSpec(2, 5)] if full else [LatticeSpec(1, 3), LatticeSpec(2, 3)]


def suite_stationary(full: bool) -> float:
    worst = 0.0
    for lat in _stationary_lattices(full):
        l = (2.0 if lat.dim == 1 else 8.0) / lat.vertex_count
        for kind in sample_kinds(lat):
            marked = marked_set(kind, lat)
            for coin in (CoinSpec(CoinKind.GROVER), CoinSpec(CoinKind.LACKADAISICAL, l)):
                psi = build_stationary(kind, lat, coin)
                worst = max(worst, residual(Walk(lat, coin, marked), psi))
    return worst


def suite_action_identity(full: bool) -> float:
    worst = 0.0
    for lat in _stationary_lattices(full):
        l = (2.0 if lat.dim == 1 else 8.0) / lat.vertex_count
        for kind in sample_kinds(lat):
            marked = marked_set(kind, lat)
            for coin in (CoinSpec(CoinKind.SKW), CoinSpec(CoinKind.MODIFIED_G, l)):
                psi = build_stationary(kind, lat, builder_coin(coin))
                moved = Walk(lat, coin, marked).step(psi)
                worst = max(worst, np.linalg.norm(moved - predicted_action(kind, lat, coin)))
    return worst


def suite_norm_drift(full: bool) -> float:
    runs = [(LatticeSpec(1, 6), MarkedSet([32]))]
    if full:
        runs.append((LatticeSpec(2, 5), MarkedSet([(1, 1), (2, 1)])))
    worst = 0.0
    for lat, marked in runs:
        coins = _coins(lat) if lat.dim == 1 else [CoinSpec(CoinKind.MODIFIED_G, 8 / 1024)]
        for coin in coins:
            w = Walk(lat, coin, marked)
            psi = w.initial_state()
            for _ in range(10_000 if full else 1000):
                psi = w.step(psi)
            worst = max(worst, abs(np.linalg.norm(psi) - 1.0))
    return worst


# name -> (check, tolerance)
SUITES: dict[str, tuple[Callable[[bool], float], float]] = {
    "bijection": (suite_bijection, 0.0),
    "shift-involution": (suite_shift_involution, 0.0),
    "coin-involution": (suite_coin_involution, 1e-12),
    "unitarity": (suite_unitarity, 1e-12),
    "dense-oracle": (suite_dense_oracle, 1e-12),
    "stationary-residual": (suite_stationary, 1e-12),
    "action-identity": (suite_action_identity, 1e-12),
    "norm-drift": (suite_norm_drift, 1e-10),
}


def run_suites(level: str = "quick") -> list[SuiteResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    full = level == "full"
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for name, (check, tol) in SUITES.items():
            t0 = time.perf_counter()
            error = None
            try:
                value = check(full)
            except Exception as exc:  # a crashing suite is a failing suite
                value, error = float("inf"), f"{type(exc).__name__}: {exc}"
            out.append(SuiteResult(name, float(value), tol, time.perf_counter() - t0, error))
    return out
