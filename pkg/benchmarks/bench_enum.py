"""Compare the compiled and pure-Python enumeration kernels.

Both kernels evaluate the divisibility formula for every (m, n) below a
bound by enumerating all subsets; the least-fixed-point strategy is timed
alongside for reference.

    python benchmarks/bench_enum.py [--bounds 8 10 12 14] [--repeat 3]
"""
import argparse
import itertools
import time

from hahntrunc.logic import kernel
from hahntrunc.logic.arithmetic import DIVISIBILITY
from hahntrunc.logic.evaluator import evaluate


def sweep(bound, strategy, backend=None):
    for m, n in itertools.product(range(bound), repeat=2):
        evaluate(DIVISIBILITY, bound, {"m": m, "n": n}, strategy, backend)


def best_of(repeat, fn, *args):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bounds", type=int, nargs="+", default=[8, 10, 12, 14])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = sorted(kernel.available_backends())
    if "cython" not in backends:
        print("compiled kernel not built; only the Python kernel is timed")
    header = ["bound", *(f"enum/{b} (s)" for b in backends), "lfp (s)"]
    if "cython" in backends:
        header.append("speedup")
    print(" | ".join(f"{h:>14}" for h in header))
    for bound in args.bounds:
        row = {b: best_of(args.repeat, sweep, bound, "enum", b) for b in backends}
        lfp = best_of(args.repeat, sweep, bound, "lfp")
        cells = [str(bound), *(f"{row[b]:.4f}" for b in backends), f"{lfp:.4f}"]
        if "cython" in row:
            cells.append(f"{row['python'] / row['cython']:.1f}x")
        print(" | ".join(f"{c:>14}" for c in cells))


if __name__ == "__main__":
    main()
