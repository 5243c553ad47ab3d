"""Backend selection for the hot kernels.

The compiled module is used when it imports; otherwise the numpy versions.
Setting ``SUDOQ_PURE_PYTHON=1`` forces the numpy versions, which is how the
test suite checks that both backends agree.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("SUDOQ_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

phase_clusters = _impl.phase_clusters
overlap_power_sums = _impl.overlap_power_sums
violation_grad = _impl.violation_grad

__all__ = ["BACKEND", "phase_clusters", "overlap_power_sums", "violation_grad"]
