"""Kernel backend selection: compiled extension when built, NumPy otherwise.

Set SPECTRAL_STATS_BACKEND=compiled or =python to force a choice; forcing
the compiled backend raises if the extension was not built. Both backends
are bit-identical, so the switch only affects speed.
"""

from __future__ import annotations

import os

from . import _kernels_py

_CHOICE = os.environ.get("SPECTRAL_STATS_BACKEND", "auto").strip().lower()

if _CHOICE in ("auto", "", "compiled", "cython"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _CHOICE not in ("auto", ""):
            raise ImportError(
                "SPECTRAL_STATS_BACKEND requested the compiled backend, "
                "but the extension is not built (pip install -e . --no-build-isolation)"
            )
        _impl = _kernels_py
        BACKEND = "python"
elif _CHOICE == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    raise ValueError(f"unknown SPECTRAL_STATS_BACKEND value {_CHOICE!r}")

bin_sum = _impl.bin_sum
convolve3x3_periodic = _impl.convolve3x3_periodic
block_mean = _impl.block_mean


def backend_name() -> str:
    """Which kernel implementation this process is using."""
    return BACKEND
