"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set TSPPATH_PURE=1 to force the fallback (used by the benchmark and the
equivalence tests).
"""
from __future__ import annotations

import os

from . import _pure

_FORCE_PURE = os.environ.get("TSPPATH_PURE", "") not in ("", "0")

if not _FORCE_PURE:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"
else:
    _impl = _pure
    BACKEND = "pure"

held_karp_path = _impl.held_karp_path
held_karp_circuit = _impl.held_karp_circuit
matching_dp = _impl.matching_dp
sample_spanning_tree = _impl.sample_spanning_tree
cut_values = _impl.cut_values
