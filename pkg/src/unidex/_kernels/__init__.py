"""Kernel backend selection.

The compiled Cython extension is preferred when importable; the numpy
fallback produces identical counts. Set UNIDEX_KERNEL=py or =cy to force
a backend (cy raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _orthants_py

_forced = os.environ.get("UNIDEX_KERNEL", "").strip().lower()

if _forced == "py":
    BACKEND = "python"
    orthant_counts = _orthants_py.orthant_counts
elif _forced == "cy":
    from . import _orthants_cy  # raises ImportError when not built

    BACKEND = "compiled"
    orthant_counts = _orthants_cy.orthant_counts
else:
    try:
        from . import _orthants_cy

        BACKEND = "compiled"
        orthant_counts = _orthants_cy.orthant_counts
    except ImportError:
        BACKEND = "python"
        orthant_counts = _orthants_py.orthant_counts

__all__ = ["BACKEND", "orthant_counts"]
