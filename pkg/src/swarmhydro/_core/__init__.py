"""Backend selection for the pairwise force kernels.

The compiled extension is preferred; the numpy fallback is selected when
the extension is missing or when SWARMHYDRO_PURE=1 is set (useful for
benchmarking and for verifying the two implementations agree).
"""
from __future__ import annotations

import os

from . import _fallback

POT_CODES = {
    None: _fallback.POT_NONE,
    "quadratic": _fallback.POT_QUADRATIC,
    "newtonian": _fallback.POT_NEWTONIAN,
    "power_law": _fallback.POT_POWER_LAW,
    "log_quadratic": _fallback.POT_LOG_QUADRATIC,
    "gauss_quadratic": _fallback.POT_GAUSS_QUADRATIC,
}

if os.environ.get("SWARMHYDRO_PURE", "0") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

hydro_accel = _impl.hydro_accel
particle_accel = _impl.particle_accel

__all__ = ["hydro_accel", "particle_accel", "BACKEND", "POT_CODES"]
