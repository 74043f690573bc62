"""Select the compiled coefficient kernels when available.

``BACKEND`` is "c" when the Cython extension loaded, "python" otherwise.
Set DIVCERT_FORCE_PURE=1 to force the fallback (used by the benchmark and
the kernel-equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels as _py_kernels

if os.environ.get("DIVCERT_FORCE_PURE"):
    _impl = _py_kernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        _impl = _py_kernels
        BACKEND = "python"

mul_one_minus_qt = _impl.mul_one_minus_qt
div_one_minus_qt = _impl.div_one_minus_qt
