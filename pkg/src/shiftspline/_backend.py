"""Select the compiled kernel loops if available, else the numpy fallback."""
import os

from . import _fallback

if os.environ.get("SHIFTSPLINE_PURE", "") not in ("", "0"):
    _core = None
else:
    try:
        from . import _core
    except ImportError:
        _core = None

if _core is not None:
    kernel_matrix = _core.kernel_matrix
    kernel_matvec = _core.kernel_matvec
    BACKEND = "cython"
else:
    kernel_matrix = _fallback.kernel_matrix
    kernel_matvec = _fallback.kernel_matvec
    BACKEND = "numpy"
