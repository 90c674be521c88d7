"""Dispatch to compiled kernels when available, NumPy otherwise.

Set ``RIBBONFORGE_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and by the cross-implementation tests).
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("RIBBONFORGE_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

polyline_writhe = _impl.polyline_writhe
segment_intersections = _impl.segment_intersections
convex_max_width_batch = _impl.convex_max_width_batch

__all__ = [
    "BACKEND",
    "polyline_writhe",
    "segment_intersections",
    "convex_max_width_batch",
]
