"""Kernel backend selection.

The compiled extension is used when importable; otherwise the NumPy
fallback. FRACTALSIG_BACKEND=python or =cython overrides the choice
(=cython fails loudly if the extension is missing, so benchmarks cannot
silently measure the wrong thing).
"""
import os

from . import _kernels_py

_requested = os.environ.get("FRACTALSIG_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = _kernels_py
elif _requested == "cython":
    from . import _kernels as _impl
elif _requested == "":
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py
else:
    raise ImportError(
        f"FRACTALSIG_BACKEND={_requested!r} not recognized (use 'python' or 'cython')")

segment_variances = _impl.segment_variances


def backend_name():
    """Which segment-variance kernel is active: 'cython' or 'python'."""
    return _impl.BACKEND_NAME
