"""Time series container, z-normalization and the padded subsequence matrix.

Every subsequence of length ``n`` is stored as one z-normalized row of an
``N x (n + pad)`` C-contiguous float64 matrix whose base address is 64-byte
aligned. ``pad`` trailing zeros round each row up to a multiple of
``vec_width`` so row starts stay aligned and distance loops never need a
remainder pass.
"""
from dataclasses import dataclass, field

import numpy as np

from ._backend import HAVE_NUMBA, resolve_backend
from .errors import ParameterError, ValidationError

EPSILON_SIGMA = 1e-12
DEFAULT_VEC_WIDTH = 8
DEFAULT_WORD_LEN = 4
ALIGN_BYTES = 64

# Rows normalized per batch; bounds the temporary (batch x n) buffers.
_ROW_BATCH = 8192


@dataclass(frozen=True)
class TimeSeries:
    """An owned, read-only, finite float64 sequence."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise ValidationError(f"time series must be 1-d, got shape {arr.shape}")
        if arr.size == 0:
            raise ValidationError("time series is empty")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise ValidationError(
                f"non-finite value {arr[bad[0]]!r} at index {int(bad[0])}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def m(self):
        return self.values.shape[0]

    def __len__(self):
        return self.m


def _as_series(series):
    return series if isinstance(series, TimeSeries) else TimeSeries(series)


def z_normalize(series):
    """Rescale a whole series to zero mean and unit (population) deviation.

    A constant series, or one whose deviation is below ``EPSILON_SIGMA``,
    maps to all zeros.
    """
    t = _as_series(series).values
    mu = t.mean()
    centered = t - mu
    sigma = np.sqrt(np.mean(centered * centered))
    if sigma < EPSILON_SIGMA or t.min() == t.max():
        return TimeSeries(np.zeros_like(t))
    return TimeSeries(centered / sigma)


def padding_for(n, vec_width):
    return (vec_width - n % vec_width) % vec_width


def _aligned_empty(shape, align=ALIGN_BYTES):
    count = int(np.prod(shape))
    nbytes = count * 8
    raw = np.empty(nbytes + align, dtype=np.uint8)
    offset = (-raw.ctypes.data) % align
    return raw[offset:offset + nbytes].view(np.float64).reshape(shape)


@dataclass(frozen=True)
class SubsequenceMatrix:
    """Z-normalized, zero-padded subsequences of a series, one per row.

    Attributes
    ----------
    data : np.ndarray
        ``(N, n + pad)`` float64, C-contiguous, 64-byte aligned, read-only.
    n : int
        Subsequence length.
    pad : int
        Trailing zero columns per row.
    vec_width : int
        Alignment unit in elements; ``n + pad`` is a multiple of it.
    mean, std : np.ndarray
        Per-row statistics of the raw subsequences (population deviation).
    degenerate : np.ndarray
        Rows whose deviation fell below ``EPSILON_SIGMA`` and were zeroed.
    series : TimeSeries
        The raw source series.
    """

    data: np.ndarray
    n: int
    pad: int
    vec_width: int
    mean: np.ndarray = field(repr=False)
    std: np.ndarray = field(repr=False)
    degenerate: np.ndarray = field(repr=False)
    series: TimeSeries = field(repr=False)

    @property
    def N(self):
        return self.data.shape[0]

    @property
    def stride(self):
        return self.n + self.pad

    def row(self, i):
        return self.data[i]


def build_subsequence_matrix(series, n, vec_width=DEFAULT_VEC_WIDTH, *,
                             word_len=DEFAULT_WORD_LEN):
    """Build the aligned matrix of per-subsequence z-normalized rows.

    Parameters
    ----------
    series : TimeSeries or array_like
    n : int
        Subsequence (discord) length, ``word_len <= n <= m``.
    vec_width : int
        Row stride is rounded up to a multiple of this many elements.
    word_len : int
        PAA word length that will be applied later; ``n`` may not be shorter.

    Returns
    -------
    SubsequenceMatrix
    """
    ts = _as_series(series)
    m = ts.m
    if vec_width < 1:
        raise ParameterError(f"vec_width must be >= 1, got {vec_width}")
    if n < 1:
        raise ParameterError(f"subsequence length n must be >= 1, got {n}")
    if n > m:
        raise ParameterError(f"subsequence length n={n} exceeds series length m={m}")
    if n < word_len:
        raise ParameterError(
            f"subsequence length n={n} is shorter than word_len={word_len}; "
            "PAA needs n >= word_len"
        )

    pad = padding_for(n, vec_width)
    N = m - n + 1
    data = _aligned_empty((N, n + pad))
    data[:, n:] = 0.0
    mean = np.empty(N)
    std = np.empty(N)

    windows = np.lib.stride_tricks.sliding_window_view(ts.values, n)
    for start in range(0, N, _ROW_BATCH):
        stop = min(start + _ROW_BATCH, N)
        w = windows[start:stop]
        mu = w.mean(axis=1)
        centered = w - mu[:, None]
        sigma = np.sqrt(np.mean(centered * centered, axis=1))
        # exactly constant windows can still show rounding noise in sigma
        flat = (sigma < EPSILON_SIGMA) | (w.min(axis=1) == w.max(axis=1))
        sigma[flat] = 0.0
        mean[start:stop] = mu
        std[start:stop] = sigma
        safe = np.where(flat, 1.0, sigma)
        block = centered / safe[:, None]
        block[flat] = 0.0
        data[start:stop, :n] = block

    degenerate = std < EPSILON_SIGMA
    for arr in (data, mean, std, degenerate):
        arr.setflags(write=False)
    return SubsequenceMatrix(data, n, pad, vec_width, mean, std, degenerate, ts)


@dataclass
class DistanceBudget:
    """Abandon threshold plus counters for one distance-evaluation stream.

    ``best_so_far_sq`` may only be raised; ``calls`` counts every evaluation
    started and ``abandoned`` the subset cut short.
    """

    best_so_far_sq: float = np.inf
    calls: int = 0
    abandoned: int = 0

    def raise_to(self, value):
        if value < self.best_so_far_sq:
            raise ValueError(
                f"best_so_far_sq may not decrease ({self.best_so_far_sq} -> {value})"
            )
        self.best_so_far_sq = float(value)


if HAVE_NUMBA:
    from numba import njit

    @njit(nogil=True, cache=True)
    def sqdist_rows(a, b, vec_width, threshold):
        """Squared distance of two padded rows, or -1.0 once it exceeds threshold.

        The partial sum is tested at every ``vec_width`` boundary; a sum that
        completes is returned even if it is above the threshold.
        """
        width = a.shape[0]
        s = 0.0
        for start in range(0, width, vec_width):
            for k in range(start, start + vec_width):
                d = a[k] - b[k]
                s += d * d
            if s > threshold and start + vec_width < width:
                return -1.0
        return s


def _sqdist_numpy(a, b, vec_width, threshold):
    sq = (a - b) ** 2
    if not np.isfinite(threshold):
        return float(sq.sum())
    partial = np.cumsum(sq.reshape(-1, vec_width).sum(axis=1))
    over = np.flatnonzero(partial[:-1] > threshold)
    if over.size:
        return -1.0
    return float(sq.sum())


def squared_distance_early_abandon(row_a, row_b, budget, vec_width=DEFAULT_VEC_WIDTH,
                                   backend=None):
    """Squared Euclidean distance between two padded rows with early abandoning.

    Returns the full sum, or ``None`` when the running sum exceeded
    ``budget.best_so_far_sq`` before the last ``vec_width`` block. Every call
    increments ``budget.calls``; abandoned ones also ``budget.abandoned``.
    """
    a = np.ascontiguousarray(row_a, dtype=np.float64)
    b = np.ascontiguousarray(row_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError(f"rows must be 1-d with equal stride, got {a.shape} and {b.shape}")
    if a.shape[0] % vec_width:
        raise ParameterError(f"row stride {a.shape[0]} is not a multiple of vec_width={vec_width}")
    budget.calls += 1
    if resolve_backend(backend) == "numba":
        d = sqdist_rows(a, b, vec_width, float(budget.best_so_far_sq))
    else:
        d = _sqdist_numpy(a, b, vec_width, float(budget.best_so_far_sq))
    if d < 0.0:
        budget.abandoned += 1
        return None
    return d
