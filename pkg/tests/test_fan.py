from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from toricsod.fan import (
    EMPTY,
    AmbiguousCone,
    NotCovered,
    SimplicialComplex,
    StackyFan,
    StackyPresentation,
    join,
    stratum_complex,
    validate,
)

P1 = SimplicialComplex.from_faces(2, [(0,), (1,)])
P2 = SimplicialComplex.from_faces(3, combinations(range(3), 2))


def test_validate_examples():
    assert validate(P1) is None
    bad = SimplicialComplex(2, ((0, 1), (0,)))
    msg = validate(bad)
    assert msg and "{1}" in msg and "{1,2}" in msg
    assert validate(SimplicialComplex(3, ((),))) is None


def test_join_examples():
    j = join(P1, P1)
    assert set(j.max_faces) == {(0, 2), (0, 3), (1, 2), (1, 3)}
    assert j.n == 4
    point = SimplicialComplex(0, ((),))
    assert join(P1, point) == P1
    j2 = join(P1, P2)
    assert len(j2.max_faces) == 6 and all(len(f) == 3 for f in j2.max_faces)


def test_stratum_examples():
    assert stratum_complex(P1, (0,)) == SimplicialComplex(1, ((),))
    assert stratum_complex(P1, (0, 1)) is EMPTY
    assert stratum_complex(P2, (2,)) == SimplicialComplex.from_faces(2, [(0,), (1,)])


def test_cone_containing_examples():
    fan = StackyFan(((1,), (-1,)), P1)
    assert fan.cone_containing((3,))[0] == (0,)
    assert fan.cone_containing((0,)) == ((), ())
    f2 = StackyFan(((1, 0), (-1, 2), (0, 1), (0, -1)), SimplicialComplex.from_faces(4, [(0, 2), (1, 2), (1, 3), (0, 3)]))
    face, lam = f2.cone_containing((0, 1))
    assert face == (2,) and lam == (1,)


def test_cone_errors():
    half = StackyFan(((1,), (-1,)), SimplicialComplex.from_faces(2, [(0,)]))
    with pytest.raises(NotCovered):
        half.cone_containing((-1,))
    overlap = StackyFan(((1, 0), (0, 1), (1, 1)), SimplicialComplex.from_faces(3, [(0, 1), (0, 2)]))
    with pytest.raises(AmbiguousCone):
        overlap.cone_containing((2, 1))


def test_presentation_injectivity():
    assert StackyPresentation(P1, ((1, 1),)).is_injective()
    assert not StackyPresentation(P1, ((2, 2),)).is_injective()
    assert not StackyPresentation(P1, ((1, 2),), (((1, 0), 2),)).is_injective()


complexes = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.frozensets(st.integers(0, n - 1), max_size=n), min_size=1, max_size=4).map(
        lambda fs: SimplicialComplex.from_faces(n, [tuple(sorted(f)) for f in fs])
    )
)


@given(complexes)
def test_membership_closure(c):
    for f in c.max_faces:
        for k in range(len(f) + 1):
            for sub in combinations(f, k):
                assert c.is_face(sub)


@given(complexes, complexes)
def test_join_face_count(a, b):
    assert len(join(a, b).max_faces) == len(a.max_faces) * len(b.max_faces)


@settings(max_examples=60)
@given(complexes, st.data())
def test_stratum_composition(c, data):
    k1 = data.draw(st.frozensets(st.integers(0, c.n - 1)))
    s1 = stratum_complex(c, tuple(sorted(k1)))
    if s1 is EMPTY or s1.n == 0:
        return
    k2 = data.draw(st.frozensets(st.integers(0, s1.n - 1)))
    rest = [i for i in range(c.n) if i not in k1]
    both = tuple(sorted(set(k1) | {rest[j] for j in k2}))
    assert stratum_complex(s1, tuple(sorted(k2))) == stratum_complex(c, both)


def test_json_round_trip():
    assert SimplicialComplex.from_json(P2.to_json()) == P2
    assert P1.to_json() == {"n": 2, "max_faces": [[1], [2]]}
