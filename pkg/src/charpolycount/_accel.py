"""JIT switch for the hot kernels.

Kernels are written once, in plain loops over numpy arrays.  When numba is
importable and ``CHARPOLYCOUNT_DISABLE_JIT`` is unset (or ``0``), they are
compiled with ``numba.njit(nogil=True, cache=True)``.  Otherwise the decorator
is the identity and the same source runs as ordinary Python/numpy code.
"""

from __future__ import annotations

import os

_flag = os.environ.get("CHARPOLYCOUNT_DISABLE_JIT", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba

    JIT_ENABLED = True
except ImportError:  # pragma: no cover - exercised through the env flag
    numba = None
    JIT_ENABLED = False


def kernel(func):
    """Compile ``func`` with numba when enabled; return it unchanged otherwise."""
    if JIT_ENABLED:
        return numba.njit(nogil=True, cache=True)(func)
    return func


def backend_name() -> str:
    return "numba" if JIT_ENABLED else "python"
