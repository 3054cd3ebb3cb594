"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting
``LEVELZERO_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("LEVELZERO_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

orbit_min = _impl.orbit_min
stabilizer = _impl.stabilizer
fixed_grid = _impl.fixed_grid
uf_components = _impl.uf_components

__all__ = ["BACKEND", "orbit_min", "stabilizer", "fixed_grid", "uf_components"]
