"""Command-line entry point: ``hn4walk {run,reproduce,verify,catalog}``.

Exit codes: 0 success, 2 bad arguments, 3 numerical-integrity failure,
4 classification mismatch against the expected table, 5 verification failure.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
import warnings
from pathlib import Path

from . import experiments as ex
from .topology import DomainError, LatticeSpec
from .verify import run_suites
from .walk import CoinKind, CoinSpec, MarkedSet, NumericalIntegrityError, Walk, default_t_max

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_MISMATCH = 4
EXIT_VERIFY = 5

OUT_ENV = "HN4WALK_OUT"

_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_marked(text: str, dim: int) -> MarkedSet:
    """``"32"`` / ``"1,2"`` in 1D, ``"(1,1),(2,1)"`` in 2D; labels are 1-based."""
    text = text.strip()
    if dim == 1:
        try:
            return MarkedSet(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise ValueError(f"bad 1D marked list {text!r}") from exc
    pairs = _PAIR.findall(text)
    if not pairs or _PAIR.sub("", text).replace(",", "").strip():
        raise ValueError(f"bad 2D marked list {text!r}; expected '(x,y),(x,y)'")
    return MarkedSet((int(x), int(y)) for x, y in pairs)


def _default_out() -> str:
    return os.environ.get(OUT_ENV, "results")


def _thresholds(args) -> ex.Thresholds:
    return ex.Thresholds(args.grow_factor, args.flat_factor, args.min_peak)


def _add_threshold_flags(p: argparse.ArgumentParser) -> None:
    d = ex.Thresholds()
    p.add_argument("--grow-factor", type=float, default=d.grow_factor)
    p.add_argument("--flat-factor", type=float, default=d.flat_factor)
    p.add_argument("--min-peak", type=float, default=d.min_peak)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hn4walk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evolve one configuration and write its time series")
    p.add_argument("--dim", type=int, choices=(1, 2), required=True)
    p.add_argument("--n", type=int, required=True, help="side length is 2**n")
    p.add_argument("--coin", choices=[k.value for k in CoinKind], required=True)
    p.add_argument("--loop-weight", default="0", help="exact rational like 2/64, or decimal")
    p.add_argument("--marked", required=True, help="1D: 32 or 1,2   2D: (1,1),(2,1)")
    p.add_argument("--steps", type=int, default=None, help="default 4*ceil(sqrt(N ln N))")
    p.add_argument("--out", default=None, help=f"output directory (env {OUT_ENV})")
    _add_threshold_flags(p)

    p = sub.add_parser("reproduce", help="run catalog experiments with all four coins")
    p.add_argument("target", help="experiment id or 'all'")
    p.add_argument("--out", default=None, help=f"output directory (env {OUT_ENV})")
    p.add_argument("--steps", type=int, default=None, help="override every t_max")
    _add_threshold_flags(p)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument("level", nargs="?", choices=("quick", "full"), default="quick")

    p = sub.add_parser("catalog", help="print the experiment catalog as JSON")
    return parser


def cmd_run(args, parser) -> int:
    try:
        lattice = LatticeSpec(args.dim, args.n)
        coin = CoinSpec(CoinKind(args.coin), ex.parse_weight(args.loop_weight))
        marked = parse_marked(args.marked, args.dim)
        marked.indices(lattice)
        if args.steps is not None and args.steps < 0:
            raise ValueError("--steps must be >= 0")
    except (ValueError, DomainError) as exc:
        parser.error(str(exc))

    steps = default_t_max(lattice) if args.steps is None else args.steps
    spec = ex.ExperimentSpec("run", lattice, marked, args.loop_weight if coin.kind.has_loop else "0",
                             steps, coins=(coin.kind,))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            series = Walk(lattice, coin, marked).evolve(steps)
        summary = ex.summarize(series, _thresholds(args))
    except NumericalIntegrityError as exc:
        print(f"numerical integrity failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out = Path(args.out or _default_out())
    path = out / f"run-{args.dim}d-n{args.n}-{coin.kind.value}.csv"
    ex._write(path, ex._series_csv(spec, series))
    print(f"wrote {path}")
    print(f"p0={summary.p0!r} max_prob={summary.max_prob!r} argmax_t={summary.argmax_t} "
          f"final_prob={summary.final_prob!r} classification={summary.classification}")
    return 0


def cmd_reproduce(args, parser) -> int:
    if args.target == "all":
        specs = ex.catalog()
    else:
        try:
            specs = [ex.get_spec(args.target)]
        except KeyError:
            ids = ", ".join(s.id for s in ex.catalog())
            parser.error(f"unknown experiment {args.target!r}; choose from: {ids}, all")
    if args.steps is not None and args.steps < 0:
        parser.error("--steps must be >= 0")

    try:
        results = [ex.run(s, args.steps, _thresholds(args)) for s in specs]
    except NumericalIntegrityError as exc:
        print(f"numerical integrity failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    out = Path(args.out or _default_out())
    ex.export(results, out)

    header = f"{'experiment':<26}{'coin':<15}{'p0':>12}{'max_prob':>12}{'argmax_t':>10}  {'class':<7}{'expect':<7}"
    print(header)
    mismatched = []
    for res in results:
        for c in res.summary.coins:
            want = res.summary.expected.get(c.coin, "")
            flag = "" if not want or want == c.classification else "  MISMATCH"
            print(f"{res.spec.id:<26}{c.coin.value:<15}{c.p0:>12.6f}{c.max_prob:>12.6f}"
                  f"{c.argmax_t:>10}  {c.classification:<7}{want:<7}{flag}")
        mismatched += [(res.spec.id, k.value) for k in res.summary.mismatches()]
    print(f"wrote {out}/summary.csv")
    if mismatched:
        print("classification mismatch: " + ", ".join(f"{e}/{c}" for e, c in mismatched),
              file=sys.stderr)
        return EXIT_MISMATCH
    return 0


def cmd_verify(args, parser) -> int:
    results = run_suites(args.level)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{r.name:<22}max_residual={r.max_residual:.3e}  tol={r.tolerance:.0e}  {status}"
        if r.error:
            line += f"  ({r.error})"
        print(line)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed suites: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return 0


def cmd_catalog(args, parser) -> int:
    sys.stdout.write(ex.catalog_json())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "reproduce": cmd_reproduce,
               "verify": cmd_verify, "catalog": cmd_catalog}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
