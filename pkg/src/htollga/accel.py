"""Kernel acceleration switch.

The hot inner loops in :mod:`htollga.kernels` are written once, in
numba-compatible numpy scalar style, and compiled with ``@njit`` by default.
Setting the environment variable ``HTOLLGA_NO_NUMBA=1`` before the package is
imported (or running on a machine without numba) selects the pure
python/numpy fallback path: the very same source, executed by the
interpreter.  Both paths pull randomness from the same ``numpy.random.
Generator`` objects and therefore produce identical results; the fallback is
just slow.  ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

ENV_FLAG = "HTOLLGA_NO_NUMBA"

NUMBA_DISABLED = os.environ.get(ENV_FLAG, "").strip() not in ("", "0")

if not NUMBA_DISABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover - exercised only without numba
        numba = None
else:
    numba = None

NUMBA_ENABLED = numba is not None


def jitted(fn):
    """Compile ``fn`` with njit(cache=True, nogil=True), or return it as-is."""
    if NUMBA_ENABLED:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend():
    """Name of the active kernel backend: ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_ENABLED else "numpy"
