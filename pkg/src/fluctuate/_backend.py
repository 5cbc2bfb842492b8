"""Selects the compiled kernels when available, else the pure-Python ones.

Set FLUCTUATE_PURE_PYTHON=1 to force the fallback (used by the benchmark
and the backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("FLUCTUATE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

renewal_march = _impl.renewal_march
phase_march = _impl.phase_march
simulate_culture = _impl.simulate_culture


def backend_name() -> str:
    return _impl.BACKEND_NAME


def have_compiled() -> bool:
    return _impl.BACKEND_NAME == "cython"
