"""
The seven reproduction experiments and their CSV/JSON outputs.

Each experiment fixes a lattice, a marked set and a self-loop weight, and is
run with all four coins. Loop weights are kept as exact rational text
(``"2/64"``) so the catalog round-trips without decimal drift; Grover and SKW
runs ignore the weight.

Classification
--------------
A coin run is ``GROWS`` when its peak success probability is at least
``grow_factor * p(0)`` *and* at least ``min_peak``; otherwise it is ``FLAT``.
The absolute floor separates O(1) growth from the O(1/N) oscillation left by a
stationary state, which for a marked pair reaches roughly ``22 M/N`` and so
cannot be told apart from growth by a ratio alone. Whether the peak also stays
under ``flat_factor * M / N`` is recorded separately as ``within_flat_bound``.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .topology import LatticeSpec
from .walk import CoinKind, CoinSpec, MarkedSet, NumericalIntegrityError, TimeSeries, Walk

__all__ = [
    "GROWS",
    "FLAT",
    "COIN_ORDER",
    "Thresholds",
    "ExperimentSpec",
    "CoinSummary",
    "RunSummary",
    "ExperimentResult",
    "parse_weight",
    "catalog",
    "get_spec",
    "classify",
    "run",
    "export",
    "catalog_json",
]

GROWS = "GROWS"
FLAT = "FLAT"

# figure panels (a)-(d)
COIN_ORDER = (CoinKind.GROVER, CoinKind.SKW, CoinKind.LACKADAISICAL, CoinKind.MODIFIED_G)

_EXCEPTIONAL = {CoinKind.GROVER: FLAT, CoinKind.SKW: GROWS,
                CoinKind.LACKADAISICAL: FLAT, CoinKind.MODIFIED_G: GROWS}
_SEARCHABLE = {k: GROWS for k in COIN_ORDER}


@dataclass(frozen=True)
class Thresholds:
    grow_factor: float = 5.0
    flat_factor: float = 10.0
    min_peak: float = 0.1


def parse_weight(text: str) -> Fraction:
    """Exact self-loop weight from ``"8/1024"``, ``"0.25"`` or ``"0"``."""
    try:
        w = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse loop weight {text!r}") from exc
    if w < 0:
        raise ValueError(f"loop weight must be >= 0, got {text!r}")
    return w


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    lattice: LatticeSpec
    marked: MarkedSet
    loop_weight: str
    t_max: int
    coins: tuple[CoinKind, ...] = COIN_ORDER
    expected: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def p0(self) -> float:
        return len(self.marked) / self.lattice.vertex_count

    def coin_spec(self, kind: CoinKind) -> CoinSpec:
        kind = CoinKind(kind)
        if kind.has_loop:
            return CoinSpec(kind, parse_weight(self.loop_weight))
        return CoinSpec(kind)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "dim": self.lattice.dim,
            "n": self.lattice.n,
            "side": self.lattice.side,
            "vertex_count": self.lattice.vertex_count,
            "marked": [list(v) if isinstance(v, tuple) else v for v in self.marked],
            "loop_weight": self.loop_weight,
            "t_max": self.t_max,
            "coins": [k.value for k in self.coins],
            "expected": {k.value: v for k, v in self.expected.items()},
        }


def catalog() -> list[ExperimentSpec]:
    ring = LatticeSpec(1, 6)
    torus = LatticeSpec(2, 5)
    return [
        ExperimentSpec("fig2-1d-selfloop", ring, MarkedSet([32]), "2/64", 1000,
                       expected=_EXCEPTIONAL),
        ExperimentSpec("fig3-nonadjacent", torus, MarkedSet([(2, 1), (8, 7)]), "8/1024", 2000,
                       expected=_SEARCHABLE),
        ExperimentSpec("fig4-diagonal", torus, MarkedSet([(k, k) for k in range(1, 33)]),
                       "128/1024", 2000, expected=_SEARCHABLE),
        ExperimentSpec("fig5-adjacent-standard", torus, MarkedSet([(1, 1), (2, 1)]), "8/1024",
                       2000, expected=_EXCEPTIONAL),
        ExperimentSpec("fig6-adjacent-longrange", torus, MarkedSet([(2, 1), (6, 1)]), "8/1024",
                       2000, expected=_EXCEPTIONAL),
        ExperimentSpec("fig7-one-selfloop", torus, MarkedSet([(1, 16)]), "4/1024", 2000,
                       expected=_EXCEPTIONAL),
        ExperimentSpec("fig8-two-selfloops", torus, MarkedSet([(16, 16)]), "4/1024", 2000,
                       expected=_EXCEPTIONAL),
    ]


def get_spec(spec_id: str) -> ExperimentSpec:
    for spec in catalog():
        if spec.id == spec_id:
            return spec
    raise KeyError(spec_id)


def catalog_json(specs: Sequence[ExperimentSpec] | None = None) -> str:
    specs = catalog() if specs is None else specs
    return json.dumps([s.to_json() for s in specs], indent=2) + "\n"


@dataclass(frozen=True)
class CoinSummary:
    coin: CoinKind
    p0: float
    max_prob: float
    argmax_t: int
    final_prob: float
    classification: str
    within_flat_bound: bool


@dataclass
class RunSummary:
    experiment: str
    coins: list[CoinSummary]
    expected: dict

    def __getitem__(self, kind) -> CoinSummary:
        kind = CoinKind(kind)
        for c in self.coins:
            if c.coin is kind:
                return c
        raise KeyError(kind)

    def mismatches(self) -> list[CoinKind]:
        return [c.coin for c in self.coins
                if c.coin in self.expected and self.expected[c.coin] != c.classification]

    @property
    def matches_expected(self) -> bool:
        return not self.mismatches()


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    series: dict
    summary: RunSummary


def classify(max_prob: float, p0: float, m_over_n: float,
             thresholds: Thresholds = Thresholds()) -> tuple[str, bool]:
    grows = max_prob >= thresholds.grow_factor * p0 and max_prob >= thresholds.min_peak
    return (GROWS if grows else FLAT), max_prob <= thresholds.flat_factor * m_over_n


def summarize(series: TimeSeries, thresholds: Thresholds = Thresholds()) -> CoinSummary:
    probs = series.probs
    if probs.min() < 0.0 or probs.max() > 1.0 + 1e-9:
        raise NumericalIntegrityError(f"{series.coin.kind.value}: probability left [0, 1]")
    peak = int(np.argmax(probs))
    m_over_n = len(series.marked) / series.lattice.vertex_count
    label, flat_ok = classify(float(probs[peak]), float(probs[0]), m_over_n, thresholds)
    return CoinSummary(series.coin.kind, float(probs[0]), float(probs[peak]), peak,
                       float(probs[-1]), label, flat_ok)


def run(spec: ExperimentSpec, t_max: int | None = None,
        thresholds: Thresholds = Thresholds()) -> ExperimentResult:
    """Evolve every coin of ``spec`` from the uniform state."""
    t_max = spec.t_max if t_max is None else t_max
    series = {}
    for kind in spec.coins:
        series[kind] = Walk(spec.lattice, spec.coin_spec(kind), spec.marked).evolve(t_max)
    summary = RunSummary(spec.id, [summarize(series[k], thresholds) for k in spec.coins],
                         dict(spec.expected))
    return ExperimentResult(spec, series, summary)


def _fmt(x: float) -> str:
    return repr(float(x))


def _series_csv(spec: ExperimentSpec, series: TimeSeries) -> str:
    kind = series.coin.kind
    buf = io.StringIO()
    marked = " ".join(f"({v[0]},{v[1]})" if isinstance(v, tuple) else str(v) for v in spec.marked)
    buf.write(f"# experiment: {spec.id}\n")
    buf.write(f"# dim: {spec.lattice.dim}\n")
    buf.write(f"# n: {spec.lattice.n}\n")
    buf.write(f"# vertex_count: {spec.lattice.vertex_count}\n")
    buf.write(f"# coin: {kind.value}\n")
    buf.write(f"# loop_weight: {spec.loop_weight if kind.has_loop else '0'}\n")
    buf.write(f"# marked: {marked}\n")
    buf.write(f"# t_max: {series.t_max}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "probability"])
    for t, p in enumerate(series.probs):
        w.writerow([t, _fmt(p)])
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def export(results: Iterable[ExperimentResult], outdir: str | os.PathLike) -> list[Path]:
    """Write ``<id>/<coin>.csv`` per run, ``summary.csv`` and ``catalog.json``."""
    outdir = Path(outdir)
    results = list(results)
    written = []
    rows = io.StringIO()
    w = csv.writer(rows, lineterminator="\n")
    w.writerow(["experiment", "coin", "p0", "max_prob", "argmax_t", "classification"])
    for res in results:
        for kind, series in res.series.items():
            path = outdir / res.spec.id / f"{kind.value}.csv"
            _write(path, _series_csv(res.spec, series))
            written.append(path)
        for c in res.summary.coins:
            w.writerow([res.spec.id, c.coin.value, _fmt(c.p0), _fmt(c.max_prob), c.argmax_t,
                        c.classification])
    for name, text in (("summary.csv", rows.getvalue()),
                       ("catalog.json", catalog_json([r.spec for r in results]))):
        _write(outdir / name, text)
        written.append(outdir / name)
    return written
