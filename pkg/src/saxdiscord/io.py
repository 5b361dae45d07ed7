"""Series ingestion, serialization and the synthetic random-walk generator."""
from pathlib import Path

import numpy as np

from .errors import ParameterError, ValidationError
from .series import TimeSeries

FORMATS = ("csv", "f64le")
ANOMALIES = ("none", "spike", "shape")

# Spike height as a multiple of the walk's range; large enough that every
# window holding the spike is farther from all spike-free windows than any
# two ordinary windows are from each other.
SPIKE_SCALE = 5.0
DEFAULT_SHAPE_LEN = 128


def _parse_csv(text):
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        field = line.split(",")[0].strip()
        try:
            values.append(float(field))
        except ValueError:
            if not values and lineno == 1:
                continue  # header
            raise ValidationError(f"line {lineno}: cannot parse {field!r} as a number") from None
    return values


def read_series(path, format="csv"):
    """Load and validate a series.

    ``csv`` holds one value per line (first column if several) with an
    optional header line; ``f64le`` is raw little-endian float64.
    """
    path = Path(path)
    if format not in FORMATS:
        raise ParameterError(f"format must be one of {FORMATS}, got {format!r}")
    try:
        if format == "csv":
            values = _parse_csv(path.read_text())
        else:
            raw = path.read_bytes()
            if len(raw) % 8:
                whole = len(raw) - len(raw) % 8
                raise ValidationError(
                    f"f64le file size {len(raw)} is not a multiple of 8; "
                    f"trailing partial value at byte offset {whole}"
                )
            values = np.frombuffer(raw, dtype="<f8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    if len(values) == 0:
        raise ValidationError(f"{path} contains no values")
    return TimeSeries(values)


def write_series(series, path, format="csv"):
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, float)
    path = Path(path)
    if format == "csv":
        path.write_text("".join(f"{v!r}\n" for v in values.tolist()))
    elif format == "f64le":
        path.write_bytes(values.astype("<f8").tobytes())
    else:
        raise ParameterError(f"format must be one of {FORMATS}, got {format!r}")


def summarize(series):
    v = series.values
    return {"count": int(v.shape[0]), "min": float(v.min()), "max": float(v.max())}


def generate_series(m, anomaly="none", anomaly_pos=0, seed=0, *,
                    anomaly_len=DEFAULT_SHAPE_LEN):
    """Seeded random walk with steps drawn uniformly from [-1, 1].

    ``spike`` raises the single value at ``anomaly_pos`` by ``SPIKE_SCALE``
    times the walk's range. ``shape`` overwrites ``anomaly_len`` values from
    ``anomaly_pos`` with a period-8 square wave centred on the local level,
    a pattern a random walk does not produce.
    """
    if m < 1:
        raise ParameterError(f"series length m must be >= 1, got {m}")
    if anomaly not in ANOMALIES:
        raise ParameterError(f"anomaly must be one of {ANOMALIES}, got {anomaly!r}")
    rng = np.random.default_rng(seed)
    t = np.cumsum(rng.uniform(-1.0, 1.0, m))
    if anomaly == "none":
        return TimeSeries(t)
    span = 1 if anomaly == "spike" else anomaly_len
    if anomaly_pos < 0 or anomaly_pos + span > m:
        raise ParameterError(
            f"anomaly at {anomaly_pos} with length {span} does not fit in m={m}"
        )
    height = SPIKE_SCALE * max(float(np.ptp(t)), 1.0)
    if anomaly == "spike":
        t[anomaly_pos] += height
    else:
        level = t[anomaly_pos]
        amp = max(float(np.ptp(t)), 1.0) / 4
        k = np.arange(anomaly_len)
        t[anomaly_pos:anomaly_pos + anomaly_len] = level + amp * np.where(k % 8 < 4, 1.0, -1.0)
    return TimeSeries(t)

