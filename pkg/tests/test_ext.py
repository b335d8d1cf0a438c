from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from toricsod.cech import WeightSelector
from toricsod.ext import OracleDisagreement, ext, ext_formula, ext_koszul, gram
from toricsod.objects import ExceptionalObject as E, decode
from toricsod.space import Space, product, projective_space, weighted_p12

P1, P2 = projective_space(1), projective_space(2)
SPACES = {"p1": P1, "p2": P2, "p12": weighted_p12(), "p1xp1": product("P1xP1", P1, P1)}


def test_formula_examples(p1):
    assert ext_formula(p1, E((), (0, 0)), E((), (0, 0))) == {0: 1}
    assert ext_formula(p1, E((0,), (0, 0)), E((1,), (0, 0))).is_zero()
    assert ext_formula(p1, E((0,), (0, 0)), E((0,), (0, 0))) == {0: 1}


def test_oracle_examples(p1):
    assert ext_koszul(p1, E((), (0, 0)), E((), (0, 0))) == {0: 1}
    assert ext_koszul(p1, E((0,), (0, 0)), E((), (0, 0))).is_zero()
    assert ext_koszul(p1, E((), (0, 0)), E((0,), (0, 0))) == {0: 1}


def test_gram_examples(p1):
    g = gram(p1, [decode((0, 0)), decode((1, 0))], oracle_fraction=1.0)
    assert g.euler == [[1, 1], [0, 1]]
    assert len(g.checked) == 4
    assert gram(p1, [E((), (0, 0))]).euler == [[1]]
    g = gram(p1, [E((0, 1), (0, 0)), E((), (0, 0))])
    assert g.tables[0][1].is_zero() and g.tables[1][0].is_zero()


# frozen values, each derived by route B before route A existed
@pytest.mark.parametrize(
    "a,b,twist,expected",
    [
        (((), (0, 0)), ((), (-1, -1)), None, {0: 1}),
        (((), (0, 0)), ((), (1, 1)), None, {1: 1}),
        (((0,), (0, 0)), ((0,), (0, 0)), (0, 0), {0: 1}),
        (((), (0, 0)), ((0,), (0, -1)), None, {0: 1}),
        (((0,), (0, 0)), ((), (0, 0)), (-1, -1), {1: 1}),
        (((0,), (0, 0)), ((), (0, 0)), (1, 1), {}),
    ],
)
def test_frozen_p1(p1, a, b, twist, expected):
    A, B = E(*a), E(*b)
    assert ext_koszul(p1, A, B, twist) == expected
    assert ext_formula(p1, A, B, twist) == expected


def test_shifts_translate_degrees(p1):
    A, B = E((), (0, 0), 2), E((0,), (0, 0), 0)
    assert ext(p1, A, B) == {2: 1}
    assert ext_koszul(p1, A, B) == {2: 1}


def test_disagreement_raises(p1, monkeypatch):
    import toricsod.ext as mod

    monkeypatch.setattr(mod, "ext_koszul", lambda *a, **k: mod.Table({3: 1}))
    with pytest.raises(OracleDisagreement) as exc:
        mod.ext(p1, E((), (0, 0)), E((), (0, 0)), check=True)
    assert exc.value.formula == {0: 1} and exc.value.oracle == {3: 1}


def _rand_obj(rng, n):
    return decode(tuple(rng.randint(-3, 3) for _ in range(n)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["p1", "p2", "p12", "p1xp1"]))
def test_routes_agree(seed, which):
    space = SPACES[which]
    rng = random.Random(seed)
    A, B = _rand_obj(rng, space.n), _rand_obj(rng, space.n)
    assert ext_formula(space, A, B) == ext_koszul(space, A, B)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_routes_agree_non_equivariant(seed):
    rng = random.Random(seed)
    sp = Space("P2", P2.complex, WeightSelector(3, ((1, 1, 1),), (0,)))
    A, B = _rand_obj(rng, 3), _rand_obj(rng, 3)
    e = tuple(rng.randint(-2, 2) for _ in range(3))
    assert ext_formula(sp, A, B, e) == ext_koszul(sp, A, B, e)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_twist_equivariance(seed):
    p2 = P2
    rng = random.Random(seed)
    A, B = _rand_obj(rng, 3), _rand_obj(rng, 3)
    e = tuple(rng.randint(-2, 2) for _ in range(3))
    assert ext(p2, A.twisted(e), B.twisted(e)) == ext(p2, A, B)


@pytest.mark.parametrize("which", ["p1", "p2", "p1xp1"])
def test_diagonal_exceptional(which):
    from itertools import product as boxes

    space = SPACES[which]
    for a in boxes(range(-1, 2), repeat=space.n):
        A = decode(a)
        if space.complex.is_face(A.I):
            assert ext(space, A, A) == {0: 1}, a


def test_weighted_point_not_exceptional():
    # frozen: with only G-invariants selected the point sheaf gains an Ext^1
    sp = SPACES["p12"]
    assert ext_koszul(sp, decode((-1, 1)), decode((-1, 1))) == {0: 1, 1: 1}
