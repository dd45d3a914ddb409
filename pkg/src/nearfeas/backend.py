"""Kernel backend selection.

The compiled extension is used when present; the pure-Python twin is the
fallback and can be forced with ``NEARFEAS_KERNELS=pure`` (useful for the
equivalence tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("NEARFEAS_KERNELS", "").lower() == "pure":
    _impl = _kernels_py
    KERNEL_BACKEND = "pure"
else:
    try:
        from . import _kernels_cy as _impl

        KERNEL_BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        KERNEL_BACKEND = "pure"

pivot_update = _impl.pivot_update
bareiss_rank = _impl.bareiss_rank
dot = _impl.dot
vec_axpy = _impl.vec_axpy
