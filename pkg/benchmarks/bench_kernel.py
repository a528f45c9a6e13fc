"""Compare the compiled and pure-Python column reduction kernels.

Every total differential of every bundled double complex is reduced by both
kernels; the outputs must be identical and the timings are reported per model.

    python benchmarks/bench_kernel.py [--repeat N] [--models a,b,...]
"""

import argparse
import sys
import timeit

from weightlab import _pykernel
from weightlab.double_complex import PAIRS, build_pair
from weightlab.io import bundled_models, bundled_path, load_model
from weightlab.kernel import _ckernel
from weightlab.linalg import _to_kernel


def workloads(names):
    for name in names:
        M = load_model(bundled_path(name))
        pairs = PAIRS if M.X is not None else ("Y",)
        cols = []
        for pair in pairs:
            T = build_pair(M, pair).tot
            for k in T.degrees:
                D = T.D(k)
                if D.ncols and D.nrows:
                    cols.append([_to_kernel(c)[0] for c in D.cols])
        yield name, cols


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--models", default="")
    args = ap.parse_args(argv)
    if _ckernel is None:
        print("compiled kernel unavailable; build it with `pip install -e . --no-build-isolation`")
        return 1
    names = args.models.split(",") if args.models else [
        n for n in bundled_models() if not n.startswith("plumbing_")]
    print(f"{'model':<24}{'matrices':>9}{'columns':>9}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    tot_py = tot_c = 0.0
    for name, mats in workloads(names):
        for cols in mats:
            if _ckernel.reduce_columns(cols, True) != _pykernel.reduce_columns(cols, True):
                print(f"{name}: kernels disagree")
                return 2
        py = min(timeit.repeat(lambda: [_pykernel.reduce_columns(c, True) for c in mats],
                               number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: [_ckernel.reduce_columns(c, True) for c in mats],
                               number=1, repeat=args.repeat))
        tot_py += py
        tot_c += cy
        ncols = sum(len(c) for c in mats)
        print(f"{name:<24}{len(mats):>9}{ncols:>9}{py:>11.4f}{cy:>11.4f}{py / max(cy, 1e-9):>8.1f}x")
    print(f"{'total':<42}{tot_py:>11.4f}{tot_c:>11.4f}{tot_py / max(tot_c, 1e-9):>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
