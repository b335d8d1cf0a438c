from __future__ import annotations

from toricsod.objects import ExceptionalObject as E
from toricsod.sod import (
    check_sod,
    lex_ascending,
    line_bundle,
    spanning_detect,
    stratum_probes,
    window,
)


def test_window_examples():
    assert window(1, (-1, 1)) == [(1,), (0,), (-1,)]
    assert window(2, [(0, 1), (0, 1)]) == [(1, 1), (1, 0), (0, 1), (0, 0)]
    assert window(2, [(1, 0), (0, 1)]) == []


def test_p2_window_passes(p2):
    r = check_sod(p2, window(3, (0, 1)), oracle_fraction=1.0)
    assert r.ok and r.asserted == 15 and r.unitriangular()
    assert r.zero_objects == [(1, 1, 1)]


def test_p1_window_report(p1):
    # frozen: nine dominant pairs carry a nonzero Hom (see the ledger)
    r = check_sod(p1, window(2, (-1, 1)))
    assert r.exceptional_ok and r.asserted == 27 and len(r.vanishing_failures) == 9
    assert r.zero_objects == [(1, 1)]
    witness = {(f.a, f.b): f.table for f in r.vanishing_failures}
    assert witness[((0, 0), (1, -1))] == {0: 1}


def test_reversed_order_fails(p1):
    r = check_sod(p1, window(2, (-1, 1)), order=lex_ascending)
    witness = {(f.a, f.b): f.table for f in r.vanishing_failures}
    # Hom(O, O_pt) is nonzero, so the reversed order must report it
    assert witness[((0, 0), (1, 0))] == {0: 1}


def test_shift_neutrality(p2):
    import random

    from toricsod.ext import ext
    from toricsod.objects import decode

    rng = random.Random(5)
    labels = window(3, (0, 1))
    shift = {a: rng.randint(-3, 3) for a in labels}
    for a in labels:
        for b in labels:
            A, B = decode(a), decode(b)
            plain = ext(p2, A, B)
            moved = ext(p2, E(A.I, A.p, shift[a]), E(B.I, B.p, shift[b]))
            assert plain.is_zero() == moved.is_zero()
            assert moved == plain.shifted(shift[a] - shift[b])


def test_monotone_assertions(p2):
    small = check_sod(p2, window(3, (0, 1)))
    big = check_sod(p2, window(3, (-1, 1)))
    assert big.asserted >= small.asserted


def test_spanning_examples(p1):
    family = [line_bundle(d) for d in window(2, (-2, 2))]
    r = spanning_detect(p1, family, [E((0,), (0, 0)), E((0, 1), (0, 0))])
    assert r.detected == {"O_{{1},(0, 0)}": True}
    assert r.zero_probes == ["O_{{1,2},(0, 0)}"]


def test_spanning_all_strata(p2):
    family = [line_bundle(d) for d in window(3, (-2, 2))]
    r = spanning_detect(p2, family, stratum_probes(p2, include_zero=True))
    assert r.ok and r.zero_probes == ["O_{{1,2,3},(0, 0, 0)}"]
