"""Kernel backend selection.

The hot sequential loops (accumulation with roundoff extraction, the
martingale coefficient recurrence, compensated oracles) exist twice: a
numba-jitted version and a pure-numpy fallback.  The environment variable
``DOTBOUNDS_BACKEND`` picks one:

* ``auto`` (default): numba when importable, else numpy;
* ``numba``: require numba, fail loudly if missing;
* ``numpy``: force the fallback (useful for debugging and benchmarks).

Both backends produce bit-identical binary32 accumulation results; see
``benchmarks/bench_backends.py`` for the speed comparison.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import numpy_backend

_active: ModuleType | None = None
_active_name = ""


def _load(name: str) -> ModuleType:
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        from . import numba_backend

        return numba_backend
    raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")


def use_backend(name: str) -> str:
    """Force a backend programmatically; returns the resolved name."""
    global _active, _active_name
    if name == "auto":
        try:
            _active = _load("numba")
            _active_name = "numba"
        except ImportError:
            _active = numpy_backend
            _active_name = "numpy"
    else:
        _active = _load(name)
        _active_name = name
    return _active_name


def active() -> ModuleType:
    """The currently selected backend module."""
    if _active is None:
        use_backend(os.environ.get("DOTBOUNDS_BACKEND", "auto").strip().lower() or "auto")
    return _active


def active_name() -> str:
    active()
    return _active_name
