"""Run catalog experiments and write CSVs plus a summary table.

    python scripts/reproduce_figures.py --out results
    python scripts/reproduce_figures.py fig5-adjacent-standard fig6-adjacent-longrange
"""
import argparse
import time
import warnings

from hn4walk import experiments as ex


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("ids", nargs="*", help="experiment ids (default: all)")
    p.add_argument("--out", default="results")
    p.add_argument("--steps", type=int, default=None)
    args = p.parse_args()

    specs = [ex.get_spec(i) for i in args.ids] if args.ids else ex.catalog()
    results = []
    for spec in specs:
        start = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = ex.run(spec, args.steps)
        results.append(res)
        print(f"{spec.id}  ({time.perf_counter() - start:.1f} s)")
        for c in res.summary.coins:
            ratio = c.max_prob / spec.p0
            print(f"  {c.coin.value:<14} max={c.max_prob:.5f} ({ratio:6.1f}·p0) "
                  f"t*={c.argmax_t:<5} {c.classification}")
    ex.export(results, args.out)
    print(f"wrote {args.out}/")


if __name__ == "__main__":
    main()
