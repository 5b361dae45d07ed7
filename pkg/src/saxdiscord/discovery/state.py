"""Result type and the shared best-so-far cell used by the engines."""
import math
import threading
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class DiscordResult:
    """Outcome of one discovery run.

    ``pos`` is 1-based; ``index`` gives the 0-based matrix row. ``dist`` is the
    true (not squared) distance from the discord to its nearest non-self
    match. ``calls`` counts distance evaluations started, ``abandoned`` the
    ones cut short by the partial-sum threshold.
    """

    engine: str
    pos: int
    dist: float
    calls: int
    abandoned: int = 0
    n: int = 0
    threads: int = 1
    nn_profile: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def index(self):
        return self.pos - 1

    @property
    def dist_sq(self):
        return self.dist * self.dist

    def to_dict(self):
        out = asdict(self)
        out.pop("nn_profile")
        return out


def count_distance_calls(result):
    return result.calls


class SharedBest:
    """Monotone (best_sq, best_pos) pair shared by all workers of one run.

    The pair only moves to a larger squared distance, or to a smaller
    position at an equal distance, so the final value is the largest
    nearest-neighbour distance with the smallest position among ties no
    matter how workers interleave. Readers may see a stale ``best_sq``; that
    only weakens pruning.

    State lives in small numpy arrays so nogil kernels can update it with
    atomics (a compare-and-swap spin lock around the pair write). Python-side
    callers go through :meth:`offer`, which uses an ordinary lock; a single
    run uses one of the two paths, never both.
    """

    def __init__(self, capacity=1024):
        self.best_sq = np.zeros(1)
        self.best_pos = np.full(1, -1, dtype=np.int64)
        self.spin = np.zeros(1, dtype=np.int64)
        self.hist_sq = np.empty(max(1, capacity))
        self.hist_pos = np.empty(max(1, capacity), dtype=np.int64)
        self.hist_len = np.zeros(1, dtype=np.int64)
        self._lock = threading.Lock()

    @property
    def value(self):
        return float(self.best_sq[0]), int(self.best_pos[0])

    def offer(self, dist_sq, index):
        if dist_sq < self.best_sq[0]:
            return False
        with self._lock:
            cur, cur_pos = self.best_sq[0], self.best_pos[0]
            if cur_pos >= 0 and not (dist_sq > cur or (dist_sq == cur and index < cur_pos)):
                return False
            self.best_pos[0] = index
            self.best_sq[0] = dist_sq
            k = self.hist_len[0]
            if k < self.hist_sq.shape[0]:
                self.hist_sq[k] = dist_sq
                self.hist_pos[k] = index
                self.hist_len[0] = k + 1
            return True

    def history(self):
        """Accepted updates in order, as ``(dist_sq, index)`` pairs (capped at capacity)."""
        k = int(self.hist_len[0])
        return list(zip(self.hist_sq[:k].tolist(), self.hist_pos[:k].tolist()))

    def to_result(self, engine, calls, abandoned, n, threads):
        sq, idx = self.value
        return DiscordResult(engine, idx + 1, math.sqrt(sq), int(calls), int(abandoned),
                             n, threads)
