from __future__ import annotations

import random

import pytest

from toricsod.bundle import (
    BundleSpec,
    base_twist,
    build,
    hirzebruch,
    lift_object,
    verify_theorem,
    weighted_bundle,
)
from toricsod.cech import WeightSelector
from toricsod.ext import ext, ext_koszul
from toricsod.fan import FanError, SimplicialComplex, StackyPresentation
from toricsod.objects import ExceptionalObject as E, decode
from toricsod.sod import lex_ascending, window
from toricsod.space import Space, product, projective_space

P1C = SimplicialComplex.from_faces(2, [(0,), (1,)])


def test_build_f1():
    t = build(hirzebruch(1))
    assert t.n == 4 and len(t.complex.max_faces) == 4
    assert (1, 1, 0, -1) in t.selector.free_rows


def test_trivial_bundle_is_product():
    t = build(hirzebruch(0))
    p1 = projective_space(1)
    base = Space("B", P1C, WeightSelector(2, ((1, 1),), (0,)))
    prod = product("BxX", base, p1)
    rng = random.Random(3)
    for _ in range(30):
        A = lift_object(t, decode((rng.randint(-2, 2), rng.randint(-2, 2))))
        B = lift_object(t, decode((rng.randint(-2, 2), rng.randint(-2, 2))))
        tw = (rng.randint(-2, 2), 0, 0, 0)
        assert ext(t, A, B, tw) == ext(prod, A, B, tw)


def test_point_base():
    point = StackyPresentation(SimplicialComplex(0, ((),)))
    t = build(BundleSpec(point, P1C, ()))
    assert t.complex == P1C and t.selector == WeightSelector.equivariant(2)


def test_lift_examples():
    t = build(hirzebruch(1))
    assert lift_object(t, E((), (0, 0))) == E((), (0, 0, 0, 0))
    assert lift_object(t, E((0,), (0, 0))) == E((2,), (0, 0, 0, 0))
    assert lift_object(t, E((), (0, 0), 2)).shift == 2


def test_base_twist_examples():
    t = build(hirzebruch(1))
    assert base_twist(t, (1, 0)) == (1, 0, 0, 0)
    assert base_twist(t, (-2, 0)) == (-2, 0, 0, 0)
    assert base_twist(t, (0, -2)) == (-2, 0, 0, 0)


def test_spec_validation():
    with pytest.raises(FanError):
        BundleSpec(StackyPresentation(P1C, ((1, 1),)), P1C, ((0,),))
    with pytest.raises(FanError):
        BundleSpec(StackyPresentation(P1C, ((2, 2),)), P1C, ((0, 0),))


def test_canonicalization_sound():
    t = build(hirzebruch(1))
    rng = random.Random(11)
    for _ in range(25):
        A = lift_object(t, decode((rng.randint(-1, 1), rng.randint(-1, 1))))
        B = lift_object(t, decode((rng.randint(-1, 1), rng.randint(-1, 1))))
        k, j = rng.randint(-3, 3), rng.randint(-3, 3)
        raw = (k - j, j, 0, 0)
        assert ext(t, A, B, raw) == ext(t, A, B, base_twist(t, (k - j, j)))


def test_flatness_proxy():
    t = build(hirzebruch(1))
    for a in window(2, (-1, 1)):
        A = lift_object(t, decode(a))
        if not t.complex.is_face(A.I):
            continue
        chis = {ext(t, A.twisted(tw), A.twisted(tw)).euler() for tw in [(d, 0, 0, 0) for d in range(-2, 3)]}
        assert chis == {1}


def test_f1_report_frozen():
    # frozen: block tables match the base, 36 lifted fiber failures (ledger)
    r = verify_theorem(build(hirzebruch(1)), window(2, (-1, 1)), (-2, 2))
    assert r.base_euler == [[1, 2], [0, 1]]
    assert r.blocks_checked == 200 and not r.block_mismatches
    assert r.asserted == 135 and len(r.failures) == 36
    assert all(r.exceptional.values())


def test_reversed_order_witness():
    r = verify_theorem(build(hirzebruch(1)), window(2, (0, 1)), (0, 0), order=lex_ascending)
    assert any(f["a"] == [0, 0] and f["b"] == [1, 0] for f in r.failures)


def test_oracle_on_total_space():
    t = build(weighted_bundle())
    rng = random.Random(2)
    for _ in range(15):
        A = lift_object(t, decode((rng.randint(-1, 1), rng.randint(-1, 1))))
        B = lift_object(t, decode((rng.randint(-1, 1), rng.randint(-1, 1))))
        tw = base_twist(t, (rng.randint(-2, 2), 0))
        assert ext(t, A, B, tw) == ext_koszul(t, A, B, tw)


def test_json_round_trip():
    spec = weighted_bundle()
    assert BundleSpec.from_json(spec.to_json()) == spec
