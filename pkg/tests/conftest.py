import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from saxdiscord._backend import HAVE_NUMBA  # noqa: E402

BACKENDS = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def random_walk(m, seed):
    rng = np.random.default_rng(seed)
    return np.cumsum(rng.uniform(-1.0, 1.0, m))


_ACCEPTANCE = []


def record_criterion(name, status, detail=""):
    _ACCEPTANCE.append((name, status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{status:4s}  {name}" + (f"  ({detail})" if detail else ""))
