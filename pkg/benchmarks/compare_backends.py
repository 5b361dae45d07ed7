"""Time the numba kernels against the pure-numpy fallback.

Each engine runs on the same prepared series under both backends, once to
warm up (JIT compilation) and then ``--repeats`` times; the median is
reported. Results must agree exactly between backends, which is checked.

    python benchmarks/compare_backends.py --m 20000 --n 128 --threads 1,4
"""
import argparse
import csv
import statistics
import sys
import time

from saxdiscord import prepare
from saxdiscord._backend import HAVE_NUMBA
from saxdiscord.discovery import run_engine
from saxdiscord.io import generate_series


def _time(fn, repeats):
    fn()
    raw = []
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        raw.append(time.perf_counter() - start)
    return statistics.median(raw), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=20_000)
    ap.add_argument("--n", type=int, default=128)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--engines", default="brute,hotsax,phidd")
    ap.add_argument("--threads", default="1,4", help="thread counts for phidd")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        ap.error("numba is not installed; nothing to compare against")

    prepared = prepare(generate_series(args.m, "spike", args.m // 2, args.seed), args.n)
    cells = []
    for engine in args.engines.split(","):
        counts = [int(k) for k in args.threads.split(",")] if engine == "phidd" else [1]
        cells += [(engine, k) for k in counts]

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["engine", "threads", "numba_s", "numpy_s", "numpy_over_numba",
                  "pos", "dist", "calls_numba", "calls_numpy"])
    for engine, k in cells:
        times, results = {}, {}
        for backend in ("numba", "numpy"):
            times[backend], results[backend] = _time(
                lambda: run_engine(engine, prepared.matrix, prepared.indexes,
                                   threads=k, backend=backend), args.repeats)
        a, b = results["numba"], results["numpy"]
        if (a.pos, a.dist) != (b.pos, b.dist):
            print(f"backends disagree for {engine}: {a} vs {b}", file=sys.stderr)
            return 1
        out.writerow([engine, k, f"{times['numba']:.4f}", f"{times['numpy']:.4f}",
                      f"{times['numpy'] / times['numba']:.2f}", a.pos, repr(a.dist),
                      a.calls, b.calls])
    return 0


if __name__ == "__main__":
    sys.exit(main())
