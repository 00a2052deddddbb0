"""Compiled and pure-python kernels must agree exactly."""

from __future__ import annotations

import math
import random
from itertools import permutations

import numpy as np
import pytest

from topicaudit import _kernels_py, kernels

try:
    from topicaudit import _kernels

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED, reason="extension not built")


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "pure-python")


def test_levenshtein_known_values():
    assert kernels.levenshtein_ids([], []) == 0
    assert kernels.levenshtein_ids([1, 2, 3], [1, 2, 3]) == 0
    assert kernels.levenshtein_ids([1, 2], [1]) == 1
    assert kernels.levenshtein_ids([1, 2, 3], [4, 5, 6]) == 3
    assert kernels.levenshtein_ids([1, 2, 3, 4], [2, 3, 4, 5]) == 2


@needs_compiled
def test_levenshtein_compiled_matches_pure():
    rng = random.Random(42)
    for _ in range(300):
        a = [rng.randint(0, 6) for _ in range(rng.randint(0, 12))]
        b = [rng.randint(0, 6) for _ in range(rng.randint(0, 12))]
        compiled = _kernels.levenshtein(
            np.asarray(a, dtype=np.intc), np.asarray(b, dtype=np.intc)
        )
        assert compiled == _kernels_py.levenshtein(a, b)


@needs_compiled
def test_perm_count_compiled_matches_pure():
    rng = random.Random(7)
    for n in range(1, 8):
        for _ in range(5):
            u = [rng.randint(-5, 10) for _ in range(n)]
            v = [rng.randint(-5, 10) for _ in range(n)]
            center = rng.randint(-20, 20)
            target = rng.randint(0, 40)
            compiled = _kernels.count_perm_dot_abs_ge(
                np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64),
                center, target,
            )
            pure = _kernels_py.count_perm_dot_abs_ge(u, v, center, target)
            assert tuple(compiled) == pure
            assert compiled[1] == math.factorial(n)


def test_perm_count_enumerates_everything():
    u, v = [1, 2, 3, 4], [1, 2, 3, 4]
    hits, total = kernels.count_perm_dot_abs_ge(u, v, 0, 0)
    assert total == 24
    assert hits == 24  # target 0 matches every permutation


def test_perm_count_brute_force_small():
    u, v = [2, 4, 6, 8], [3, 1, 4, 1]
    center, target = 40, 6
    expected = sum(
        1 for p in permutations(v) if abs(sum(a * b for a, b in zip(u, p)) - center) >= target
    )
    hits, total = kernels.count_perm_dot_abs_ge(u, v, center, target)
    assert (hits, total) == (expected, 24)


def test_perm_count_guards_large_n():
    with pytest.raises(ValueError):
        kernels.count_perm_dot_abs_ge(list(range(14)), list(range(14)), 0, 0)
