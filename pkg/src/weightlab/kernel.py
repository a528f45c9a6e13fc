"""Kernel selection: compiled column reduction when available.

Set ``WEIGHTLAB_PURE_PYTHON=1`` to force the pure-Python kernel.
"""

import os

from . import _pykernel

try:
    if os.environ.get("WEIGHTLAB_PURE_PYTHON") == "1":
        raise ImportError("pure Python requested")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"

__all__ = ["BACKEND", "reduce_columns", "reduce_columns_python"]


def reduce_columns(cols, track=True):
    """Fraction-free left-to-right column reduction.

    Uses the compiled kernel and retries in Python on int64 overflow.
    """
    if _ckernel is not None:
        try:
            return _ckernel.reduce_columns(cols, track)
        except OverflowError:
            pass
    return _pykernel.reduce_columns(cols, track)


reduce_columns_python = _pykernel.reduce_columns
