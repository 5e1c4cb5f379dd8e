"""Pick the kernel implementation once, at import time."""

from __future__ import annotations

import os

if os.environ.get("FRADEX_PURE_PYTHON", "").strip() not in ("", "0"):
    from fradex import _pykernels as kernels

    COMPILED = False
else:
    try:
        from fradex import _kernels as kernels  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from fradex import _pykernels as kernels

        COMPILED = False

BACKEND = "cython" if COMPILED else "numpy"

__all__ = ["kernels", "COMPILED", "BACKEND"]
