from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from toricsod import _pykernels, kernels
from toricsod.linalg import rank_exact, solve_integer, smith_invariants

matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=1, max_size=6)
)


@given(matrices)
def test_rank_backends_agree(m):
    assert kernels.rank(m, len(m[0])) == _pykernels.rank(m, len(m[0]))


def test_rank_overflow_falls_back():
    big = [[10**30, 1], [1, 10**30]]
    assert kernels.rank(big, 2) == 2
    huge = [[2**62, 2**62 - 1, 3], [2**62 - 5, 2**61, 7], [11, 13, 2**62 - 9]]
    assert kernels.rank(huge, 3) == _pykernels.rank(huge, 3) == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_cech_pattern_backends_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    faces = [sum(1 << i for i in range(n) if rng.random() < 0.6) for _ in range(rng.randint(1, 5))]
    k = sum(1 << i for i in range(n) if rng.random() < 0.2)
    neg = sum(1 << i for i in range(n) if rng.random() < 0.4)
    assert kernels.cech_pattern(faces, k, neg) == _pykernels.cech_pattern(faces, k, neg)


def test_backend_flag():
    assert kernels.BACKEND in ("cython", "python")


def test_solve_integer():
    sol = solve_integer([[2, 1], [1, 1]], [5, 3])
    assert sol == [2, 1]
    assert solve_integer([[1, 1], [1, 1]], [1, 2]) is None
    half = solve_integer([[2]], [1])
    assert half is not None and half[0].denominator == 2


def test_smith():
    assert smith_invariants([[2, 4], [6, 8]]) in ([2, 4], [2, -4])
    assert rank_exact([[1, 2], [2, 4]]) == 1
