"""Kernel backend selection.

The compiled Cython kernels are used when the extension built; otherwise the
pure-numpy fallback takes over with identical semantics. Set
``COSTWALK_KERNEL=fallback`` (or ``native``) to force a backend, e.g. for the
benchmark in ``benchmarks/bench_kernels.py`` or for parity testing.
"""

import os

_requested = os.environ.get("COSTWALK_KERNEL", "").strip().lower()

if _requested in ("", "native"):
    try:
        from . import _native as _impl

        BACKEND = "native"
    except ImportError:
        if _requested == "native":
            raise
        from . import _fallback as _impl

        BACKEND = "fallback"
elif _requested in ("fallback", "python"):
    from . import _fallback as _impl

    BACKEND = "fallback"
else:
    raise ImportError(
        f"unknown COSTWALK_KERNEL value {_requested!r}; use 'native' or 'fallback'"
    )

hindcast_errors = _impl.hindcast_errors
corpus_norm_errors = _impl.corpus_norm_errors


def backend() -> str:
    """Name of the active kernel backend ('native' or 'fallback')."""
    return BACKEND
