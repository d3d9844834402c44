"""Overlap of the uniform state with the unit eigenspace of small dense walks.

A large overlap means most amplitude never leaves the stationary subspace,
so the search stalls.  The lower bound 1 - ||correction||^2 is printed next
to each exceptional configuration.

    python scripts/stationary_overlap.py --n 3
"""
import argparse
import warnings

from hn4walk.oracle import build_dense, projection_norm_sq, unit_eigenspace
from hn4walk.stationary import correction_norm_sq, marked_set
from hn4walk.topology import LatticeSpec
from hn4walk.verify import sample_kinds
from hn4walk.walk import CoinKind, CoinSpec, MarkedSet, build_initial_state


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dim", type=int, choices=(1, 2), default=2)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--loop-scale", type=float, default=8.0, help="l = scale / N")
    args = p.parse_args()

    lattice = LatticeSpec(args.dim, args.n)
    l = args.loop_scale / lattice.vertex_count
    coins = [CoinSpec(CoinKind.GROVER), CoinSpec(CoinKind.SKW),
             CoinSpec(CoinKind.LACKADAISICAL, l), CoinSpec(CoinKind.MODIFIED_G, l)]
    rows = [(str(k), marked_set(k, lattice), k) for k in sample_kinds(lattice)]
    if args.dim == 2:
        diag = MarkedSet([(i, i) for i in range(1, lattice.side + 1)])
        rows.append(("diagonal", diag, None))

    print(f"{'configuration':<64}" + "".join(f"{c.kind.value:>14}" for c in coins) + "   bound")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for label, marked, kind in rows:
            cells = []
            for coin in coins:
                basis = unit_eigenspace(build_dense(lattice, coin, marked))
                cells.append(projection_norm_sq(basis, build_initial_state(lattice, coin)))
            bound = "" if kind is None else f"{1 - correction_norm_sq(kind, lattice, coins[0]):8.3f}"
            print(f"{label[:63]:<64}" + "".join(f"{x:14.3e}" for x in cells) + bound)


if __name__ == "__main__":
    main()
