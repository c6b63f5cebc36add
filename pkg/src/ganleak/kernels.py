"""Backend selection for the sampling kernels.

Prefers the compiled extension, falls back to the numpy implementation.
Set ``GANLEAK_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by tests that exercise both paths). Both backends are bit-identical,
so the choice never changes results.
"""
from __future__ import annotations

import os

from . import _simulate_np

if os.environ.get("GANLEAK_PURE_PYTHON"):
    _impl = _simulate_np
else:
    try:
        from . import _simulate as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _simulate_np

BACKEND: str = _impl.BACKEND

sample_source_codes = _impl.sample_source_codes
classify_codes = _impl.classify_codes
