"""Kernel backend selection.

The numba kernels are used when numba imports cleanly and the environment
variable ``EXUBERANCE_DISABLE_NUMBA`` is unset (or ``0``).  Otherwise the
vectorised numpy kernels are used.  Both expose the same functions.
"""
import os

_FLAG = "EXUBERANCE_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(_FLAG, "0").strip().lower() in ("", "0", "false", "no")


try:
    if not _numba_requested():
        raise ImportError("numba disabled by " + _FLAG)
    import numba
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip probing the TBB layer; the installed TBB may be too old
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    from . import _kernels_numba as kernels
    BACKEND = "numba"
    HAS_NUMBA = True
except ImportError:
    from . import _kernels_numpy as kernels
    BACKEND = "numpy"
    try:
        import numba  # noqa: F401
        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False


def set_workers(workers):
    """Bound kernel parallelism; returns the previous setting (numba only)."""
    if BACKEND != "numba" or workers is None:
        return None
    import numba
    prev = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(workers), numba.config.NUMBA_NUM_THREADS)))
    return prev


__all__ = ["BACKEND", "HAS_NUMBA", "kernels", "set_workers"]
