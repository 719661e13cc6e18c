"""Backend switch for the hot kernels.

Set ``SUPOU_DISABLE_NUMBA=1`` before import to force the pure-numpy path.
"""
import os

try:
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

_DISABLE = os.environ.get("SUPOU_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

HAS_NUMBA = _numba is not None
USE_NUMBA = HAS_NUMBA and not _DISABLE


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity decorator."""
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    kwargs.setdefault("error_model", "numpy")
    if _numba is None:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    return _numba.njit(*args, **kwargs)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def thread_count():
    """Worker threads for ensembles, from ``SUPOU_THREADS`` (default 1)."""
    raw = os.environ.get("SUPOU_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)
