"""Kernel backend selection.

Hot loops exist twice: numba ``@njit(nogil=True)`` kernels and a pure-numpy
path. The default is numba when it imports; set ``SAXDISCORD_BACKEND=numpy``
to force the fallback (the numpy path is also used when numba is missing).
"""
import os

ENV_FLAG = "SAXDISCORD_BACKEND"
BACKENDS = ("numba", "numpy")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def default_backend():
    choice = os.environ.get(ENV_FLAG, "").strip().lower()
    if choice == "numpy":
        return "numpy"
    if choice not in ("", "numba"):
        raise ValueError(f"{ENV_FLAG} must be one of {BACKENDS}, got {choice!r}")
    return "numba" if HAVE_NUMBA else "numpy"


def resolve_backend(backend=None):
    """Return a concrete backend name, validating explicit requests."""
    if backend is None:
        return default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}, got {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
