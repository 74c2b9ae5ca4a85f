"""Kernel backend selection.

The numba backend is used when numba imports and ``SYMSTAB_DISABLE_NUMBA`` is
unset (or ``0``); otherwise the vectorized numpy backend is used.  Callers go
through :data:`backend` so that :func:`use` can switch at runtime.
"""

import os

from . import _numpy

_DISABLED = os.environ.get("SYMSTAB_DISABLE_NUMBA", "").strip().lower() not in {"", "0", "false", "no"}

try:
    from . import _numba
except ImportError:  # numba missing
    _numba = None

BACKENDS = {"numpy": _numpy}
if _numba is not None:
    BACKENDS["numba"] = _numba

backend = _numpy if (_DISABLED or _numba is None) else _numba


def use(name):
    """Select the active kernel backend by name; returns the previous name."""
    global backend
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}; have {sorted(BACKENDS)}")
    previous = backend.NAME
    backend = BACKENDS[name]
    return previous


def active():
    return backend.NAME
