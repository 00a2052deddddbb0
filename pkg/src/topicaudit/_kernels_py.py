"""Pure-python fallbacks for the compiled kernels.

Same results as _kernels.pyx, selected by kernels.py when the extension is
unavailable (or forced via TOPICAUDIT_PURE_KERNELS=1).
"""

from __future__ import annotations

from itertools import permutations


def levenshtein(a, b) -> int:
    """Edit distance between two int-encoded token sequences (two-row DP)."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    for i in range(la):
        curr = [i + 1] + [0] * lb
        ai = a[i]
        for j in range(lb):
            cost = 0 if ai == b[j] else 1
            curr[j + 1] = min(prev[j] + cost, prev[j + 1] + 1, curr[j] + 1)
        prev = curr
    return prev[lb]


def count_perm_dot_abs_ge(u, v, center: int, target: int) -> tuple[int, int]:
    """Over all permutations p of v, count |sum_i u[i]*v[p(i)] - center| >= target."""
    u = list(u)
    v = list(v)
    if len(u) != len(v):
        raise ValueError("u and v must have equal length")
    if not u:
        return (0, 1)
    if len(u) > 13:
        raise ValueError("permutation enumeration limited to n <= 13")
    hits = 0
    total = 0
    for perm in permutations(v):
        total += 1
        dot = sum(x * y for x, y in zip(u, perm))
        if abs(dot - center) >= target:
            hits += 1
    return (hits, total)
