"""Kernel backend selection.

The compiled extension is used when available, the pure-Python fallback
otherwise. Set ``PERCODETECT_KERNELS=python`` (or ``=c``) to force one
backend; both produce bit-identical results.
"""

from __future__ import annotations

import os

_choice = os.environ.get("PERCODETECT_KERNELS", "auto").strip().lower()

if _choice in ("python", "pure", "py"):
    from . import _kernels_py as kernels
elif _choice in ("c", "compiled", "ext"):
    from . import _kernels as kernels  # type: ignore[no-redef]
elif _choice in ("", "auto"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]
else:
    raise ValueError(
        f"PERCODETECT_KERNELS={_choice!r} not understood; use 'auto', 'c' or 'python'"
    )


def backend_name() -> str:
    """'c' for the compiled extension, 'python' for the fallback."""
    return kernels.BACKEND_NAME
