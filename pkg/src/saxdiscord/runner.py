"""End-to-end runs and the thread-scaling benchmark."""
import csv
import io
import json
import statistics
import time
from dataclasses import dataclass, field
from typing import Optional

from ._backend import resolve_backend
from .discovery import ENGINES, run_engine
from .errors import ParameterError
from .io import ANOMALIES, FORMATS, generate_series, read_series
from .pipeline import prepare
from .series import DEFAULT_VEC_WIDTH, DEFAULT_WORD_LEN
from .sax import DEFAULT_ALPHABET

RESULT_FIELDS = ("engine", "m", "n", "word_len", "alphabet", "threads", "pos", "dist",
                 "calls", "prep_time_s", "search_time_s")
BENCH_FIELDS = ("backend", "engine", "m", "n", "threads", "wall_time_s", "calls", "pos",
                "dist", "speedup", "efficiency", "raw_times_s")
OUTPUT_FORMATS = ("json", "csv")


@dataclass
class GeneratorSpec:
    m: int
    anomaly: str = "none"
    anomaly_pos: int = 0


@dataclass
class RunConfig:
    """Everything one discovery run needs; ``validate`` runs before any work."""

    n: int
    input: Optional[str] = None
    format: str = "csv"
    generator: Optional[GeneratorSpec] = None
    word_len: int = DEFAULT_WORD_LEN
    alphabet: int = DEFAULT_ALPHABET
    vec_width: int = DEFAULT_VEC_WIDTH
    engine: str = "phidd"
    threads: int = 1
    seed: int = 0
    output: str = "json"
    backend: Optional[str] = None
    chunk: int = 1

    def validate(self):
        if (self.input is None) == (self.generator is None):
            raise ParameterError("give exactly one of an input path or a generator spec")
        if self.format not in FORMATS:
            raise ParameterError(f"--format must be one of {FORMATS}, got {self.format!r}")
        if self.engine not in ENGINES:
            raise ParameterError(f"--engine must be one of {ENGINES}, got {self.engine!r}")
        if self.output not in OUTPUT_FORMATS:
            raise ParameterError(f"--output must be one of {OUTPUT_FORMATS}, got {self.output!r}")
        for name, low in (("n", 1), ("word_len", 1), ("alphabet", 2), ("vec_width", 1),
                          ("threads", 1), ("chunk", 1)):
            value = getattr(self, name)
            if not isinstance(value, int) or value < low:
                raise ParameterError(f"{name} must be an integer >= {low}, got {value!r}")
        if self.word_len > self.n:
            raise ParameterError(f"word_len={self.word_len} exceeds n={self.n}")
        if self.alphabet ** self.word_len > 2 ** 24:
            raise ParameterError("alphabet ** word_len exceeds the 2**24 word limit")
        if self.generator is not None:
            g = self.generator
            if g.m < 1:
                raise ParameterError(f"generated length m must be >= 1, got {g.m}")
            if g.anomaly not in ANOMALIES:
                raise ParameterError(f"anomaly must be one of {ANOMALIES}, got {g.anomaly!r}")
        try:
            resolve_backend(self.backend)
        except (ValueError, RuntimeError) as exc:
            raise ParameterError(str(exc)) from exc
        return self


def load_series(config):
    if config.generator is not None:
        g = config.generator
        return generate_series(g.m, g.anomaly, g.anomaly_pos, config.seed)
    return read_series(config.input, config.format)


def discover(series, config):
    """Prepare and search an in-memory series; IO is not part of either timing."""
    t0 = time.perf_counter()
    prepared = prepare(series, config.n, word_len=config.word_len,
                       alphabet=config.alphabet, vec_width=config.vec_width,
                       threads=config.threads)
    t1 = time.perf_counter()
    kwargs = {"backend": config.backend}
    if config.engine == "phidd":
        kwargs["chunk"] = config.chunk
    result = run_engine(config.engine, prepared.matrix, prepared.indexes,
                        threads=config.threads, **kwargs)
    t2 = time.perf_counter()
    row = {
        "engine": config.engine,
        "m": series.m,
        "n": config.n,
        "word_len": config.word_len,
        "alphabet": config.alphabet,
        "threads": config.threads if config.engine == "phidd" else 1,
        "pos": result.pos,
        "dist": result.dist,
        "calls": result.calls,
        "prep_time_s": t1 - t0,
        "search_time_s": t2 - t1,
    }
    return result, row


def run_discovery(config):
    config.validate()
    return discover(load_series(config), config)


def format_result(row, output="json"):
    if output == "json":
        return json.dumps(row)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RESULT_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    return buf.getvalue().rstrip("\n")


@dataclass
class BenchReport:
    """Median wall times per cell plus speedup t1/tk and efficiency speedup/k."""

    rows: list = field(default_factory=list)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            out = dict(row)
            out["raw_times_s"] = ";".join(repr(x) for x in row["raw_times_s"])
            writer.writerow(out)
        return buf.getvalue()

    def to_json(self):
        return json.dumps(self.rows)


def add_scaling_columns(rows):
    """Fill speedup/efficiency from each group's single-thread median."""
    base = {}
    for row in rows:
        if row["threads"] == 1:
            base[(row["backend"], row["engine"], row["m"], row["n"])] = row["wall_time_s"]
    for row in rows:
        t1 = base[(row["backend"], row["engine"], row["m"], row["n"])]
        k = row["threads"]
        row["speedup"] = t1 / row["wall_time_s"] if row["wall_time_s"] > 0 else float("nan")
        row["efficiency"] = row["speedup"] / k
    return rows


def run_bench(series, n_values, thread_counts, repeats=3, *, engine="phidd",
              backends=(None,), word_len=DEFAULT_WORD_LEN, alphabet=DEFAULT_ALPHABET,
              vec_width=DEFAULT_VEC_WIDTH, timer=time.perf_counter):
    """Time ``engine`` over every (backend, n, threads) cell, ``repeats`` times each.

    A threads=1 cell is always included so speedup has a baseline. Only the
    search is timed; preparation runs once per n and is excluded.
    """
    if repeats < 1:
        raise ParameterError(f"repeats must be >= 1, got {repeats}")
    if engine not in ENGINES:
        raise ParameterError(f"engine must be one of {ENGINES}, got {engine!r}")
    threads = sorted(set(thread_counts) | {1})
    if threads[0] < 1:
        raise ParameterError(f"thread counts must be >= 1, got {thread_counts}")
    rows = []
    for n in n_values:
        prepared = prepare(series, n, word_len=word_len, alphabet=alphabet,
                           vec_width=vec_width)
        for backend in backends:
            name = resolve_backend(backend)
            # warm-up run keeps JIT compilation out of the measurements
            run_engine(engine, prepared.matrix, prepared.indexes, threads=1, backend=name)
            for k in threads:
                raw = []
                for _ in range(repeats):
                    start = timer()
                    result = run_engine(engine, prepared.matrix, prepared.indexes,
                                        threads=k, backend=name)
                    raw.append(timer() - start)
                rows.append({
                    "backend": name, "engine": engine, "m": series.m, "n": n,
                    "threads": k, "wall_time_s": statistics.median(raw),
                    "calls": result.calls, "pos": result.pos, "dist": result.dist,
                    "raw_times_s": raw,
                })
    return BenchReport(add_scaling_columns(rows))
