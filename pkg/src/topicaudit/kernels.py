"""Kernel dispatch: compiled extension when available, pure python otherwise.

Set TOPICAUDIT_PURE_KERNELS=1 to force the fallback (used by the benchmark
and by tests that exercise both paths).
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from . import _kernels_py

if os.environ.get("TOPICAUDIT_PURE_KERNELS") == "1":
    _impl = _kernels_py
    BACKEND = "pure-python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "pure-python"


def levenshtein_ids(a: Sequence[int], b: Sequence[int]) -> int:
    """Edit distance (unit-cost substitution/insertion/deletion) on id sequences."""
    if BACKEND == "compiled":
        return _impl.levenshtein(
            np.ascontiguousarray(a, dtype=np.intc), np.ascontiguousarray(b, dtype=np.intc)
        )
    return _impl.levenshtein(list(a), list(b))


def count_perm_dot_abs_ge(
    u: Sequence[int], v: Sequence[int], center: int, target: int
) -> tuple[int, int]:
    """Count permutations p of v with |u . v_p - center| >= target; returns (hits, n!)."""
    if BACKEND == "compiled":
        hits, total = _impl.count_perm_dot_abs_ge(
            np.ascontiguousarray(u, dtype=np.int64),
            np.ascontiguousarray(v, dtype=np.int64),
            int(center),
            int(target),
        )
        return int(hits), int(total)
    return _impl.count_perm_dot_abs_ge(list(u), list(v), int(center), int(target))
