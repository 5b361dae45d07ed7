"""Command line interface: ``saxdiscord find | generate | bench``.

Exit codes: 0 success, 2 parameter error, 3 input validation error.
"""
import argparse
import logging
import os
import sys

from .discovery import ENGINES
from .errors import ParameterError, ValidationError
from .io import ANOMALIES, FORMATS, generate_series, summarize, write_series
from .runner import GeneratorSpec, RunConfig, format_result, load_series, discover, run_bench

log = logging.getLogger("saxdiscord")

EXIT_PARAMETER = 2
EXIT_VALIDATION = 3

_HINTS = {
    ParameterError: "check --n, --word-len, --alphabet, --vec-width and --threads",
    ValidationError: "the input must hold finite numbers (csv: one per line; f64le: raw float64)",
}


def _default_threads():
    raw = os.environ.get("THREADS")
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise ParameterError(f"THREADS environment variable is not an integer: {raw!r}") from None


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_search_args(p):
    p.add_argument("--n", type=int, required=True, help="discord (subsequence) length")
    p.add_argument("--word-len", type=int, default=4)
    p.add_argument("--alphabet", type=int, default=4)
    p.add_argument("--vec-width", type=int, default=8)
    p.add_argument("--backend", choices=("numba", "numpy"), default=None,
                   help="kernel backend (default: SAXDISCORD_BACKEND or numba)")


def _add_source_args(p):
    p.add_argument("--input", help="series file; omit to generate one")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--m", type=int, default=None, help="generated series length")
    p.add_argument("--anomaly", choices=ANOMALIES, default="none")
    p.add_argument("--anomaly-pos", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="saxdiscord", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    find = sub.add_parser("find", help="find the top discord of a series")
    _add_source_args(find)
    _add_search_args(find)
    find.add_argument("--engine", choices=ENGINES, default="phidd")
    find.add_argument("--threads", type=int, default=None,
                      help="worker threads for phidd (default: $THREADS or 1)")
    find.add_argument("--chunk", type=int, default=1,
                      help="subsequences per dynamic-scheduling grab")
    find.add_argument("--output", choices=("json", "csv"), default="json")

    gen = sub.add_parser("generate", help="write a seeded random-walk series")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--anomaly", choices=ANOMALIES, default="none")
    gen.add_argument("--anomaly-pos", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--format", choices=FORMATS, default="csv")
    gen.add_argument("--dest", required=True, help="output file path")

    bench = sub.add_parser("bench", help="thread-scaling benchmark, csv on stdout")
    _add_source_args(bench)
    bench.add_argument("--n", type=_int_list, required=True, help="comma-separated lengths")
    bench.add_argument("--word-len", type=int, default=4)
    bench.add_argument("--alphabet", type=int, default=4)
    bench.add_argument("--vec-width", type=int, default=8)
    bench.add_argument("--engine", choices=ENGINES, default="phidd")
    bench.add_argument("--threads", type=_int_list, default=None,
                       help="comma-separated thread counts (default: $THREADS or 1,2,4,8)")
    bench.add_argument("--repeats", type=int, default=3)
    bench.add_argument("--backend", choices=("numba", "numpy", "both"), default=None)
    bench.add_argument("--output", choices=("json", "csv"), default="csv")
    return parser


def _source(args):
    if args.input is not None:
        return None
    if args.m is None:
        raise ParameterError("give --input PATH or --m LENGTH to generate a series")
    return GeneratorSpec(args.m, args.anomaly, args.anomaly_pos)


def _cmd_find(args):
    threads = args.threads if args.threads is not None else _default_threads()
    config = RunConfig(
        n=args.n, input=args.input, format=args.format, generator=_source(args),
        word_len=args.word_len, alphabet=args.alphabet, vec_width=args.vec_width,
        engine=args.engine, threads=threads, seed=args.seed, output=args.output,
        backend=args.backend, chunk=args.chunk,
    ).validate()
    series = load_series(config)
    log.info("loaded series: %s", summarize(series))
    _, row = discover(series, config)
    print(format_result(row, config.output))


def _cmd_generate(args):
    series = generate_series(args.m, args.anomaly, args.anomaly_pos, args.seed)
    write_series(series, args.dest, args.format)
    log.info("wrote %s", summarize(series))


def _cmd_bench(args):
    if args.threads is None:
        env = os.environ.get("THREADS")
        threads = [_default_threads()] if env else [1, 2, 4, 8]
    else:
        threads = args.threads
    config = RunConfig(n=max(args.n), input=args.input, format=args.format,
                       generator=_source(args), word_len=args.word_len,
                       alphabet=args.alphabet, vec_width=args.vec_width,
                       engine=args.engine, seed=args.seed).validate()
    if min(args.n) < 1 or min(threads) < 1:
        raise ParameterError("--n and --threads values must be >= 1")
    backends = ("numba", "numpy") if args.backend == "both" else (args.backend,)
    series = load_series(config)
    log.info("loaded series: %s", summarize(series))
    report = run_bench(series, args.n, threads, args.repeats, engine=args.engine,
                       backends=backends, word_len=args.word_len,
                       alphabet=args.alphabet, vec_width=args.vec_width)
    sys.stdout.write(report.to_csv() if args.output == "csv" else report.to_json() + "\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    handler = {"find": _cmd_find, "generate": _cmd_generate, "bench": _cmd_bench}
    try:
        handler[args.command](args)
    except ValidationError as exc:
        print(f"saxdiscord: input error: {exc}\n  hint: {_HINTS[ValidationError]}",
              file=sys.stderr)
        return EXIT_VALIDATION
    except ParameterError as exc:
        print(f"saxdiscord: parameter error: {exc}\n  hint: {_HINTS[ParameterError]}",
              file=sys.stderr)
        return EXIT_PARAMETER
    return 0


if __name__ == "__main__":
    sys.exit(main())
