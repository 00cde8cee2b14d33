"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise, or
when the environment variable ``LEVELONE_PURE`` is set to a non-empty value,
the numpy fallback in ``_purepy`` is used.  Both produce identical results.
"""
import os

from . import _purepy

if os.environ.get("LEVELONE_PURE"):
    _impl = _purepy
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _purepy
        BACKEND = "python"

wht = _impl.wht
subset_search = _impl.subset_search

# the compiled search handles up to 64 points
MAX_SEARCH_DIM = 6
