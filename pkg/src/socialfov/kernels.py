"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback is loaded. Set ``SOCIALFOV_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("SOCIALFOV_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

disk_min = _impl.disk_min
disk_min_many = _impl.disk_min_many
render_disks = _impl.render_disks
