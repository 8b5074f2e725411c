"""Kernel selection: compiled extension when available, pure Python otherwise.

Both backends implement the same functions and produce bit-identical output,
so which one loads only affects speed. Set CHI_AUDIT_PURE=1 to force the
pure-Python kernel (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

if os.environ.get("CHI_AUDIT_PURE"):
    from . import _kernel as kernel
else:
    try:
        from . import _ckernel as kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _kernel as kernel  # type: ignore[no-redef]

BACKEND = kernel.BACKEND_NAME

__all__ = ["kernel", "BACKEND"]
