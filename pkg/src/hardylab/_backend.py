"""Kernel backend selection.

The compiled ``_core`` extension is used when it imports; otherwise the
numpy fallback in ``_core_py``.  Setting ``HARDYLAB_PURE_PYTHON=1`` forces
the fallback.
"""
import os

from . import _core_py

core = _core_py
if os.environ.get("HARDYLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as core  # type: ignore[no-redef]
    except ImportError:
        core = _core_py

BACKEND = core.NAME
orthonormalize = core.orthonormalize
jacobi_eigh = core.jacobi_eigh
constrained_max = core.constrained_max
