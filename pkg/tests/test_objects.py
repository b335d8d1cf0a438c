from __future__ import annotations

from hypothesis import given, strategies as st

from toricsod.objects import ExceptionalObject as E, Order, compare_pairs, decode, encode, koszul


def test_decode_examples():
    assert decode((0, 0)) == E((), (0, 0))
    assert decode((1, -2)) == E((0,), (0, -2))
    assert decode((2, 1)) == E((0, 1), (1, 0))


def test_encode_examples():
    assert encode((), (0, 0)) == (0, 0)
    assert encode((0,), (0, -2)) == (1, -2)
    assert encode((0,), (-1, 0)) == (-1, 0) == encode((), (-1, 0))


def test_compare_examples():
    assert compare_pairs(E((), (1, 0)), E((), (0, 5))) is Order.GREATER
    assert compare_pairs(E((0,), (0, 0)), E((), (0, 0))) is Order.GREATER
    assert compare_pairs(E((0,), (0, 0)), E((1,), (0, 0))) is Order.TIE
    assert compare_pairs(E((0,), (0, 0)), E((0,), (0, 0))) is Order.EQUAL


def test_tie_between_lex_comparable_labels():
    assert compare_pairs(decode((1, 0)), decode((0, 1))) is Order.TIE


def test_koszul_examples():
    one = koszul((0,), (0, 0))
    assert [[t.twist for t in term] for term in one] == [[(0, 0)], [(-1, 0)]]
    assert [[t.twist for t in term] for term in koszul((), (2, 3))] == [[(-2, -3)]]
    two = koszul((0, 1), (1, 0))
    assert [[t.twist for t in term] for term in two] == [[(-1, 0)], [(-2, 0), (-1, -1)], [(-2, -1)]]


labels = st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.integers(-5, 5)] * n))


@given(labels)
def test_round_trip(a):
    assert encode(decode(a).I, decode(a).p) == a


@given(st.integers(0, 4).flatmap(lambda k: st.tuples(st.integers(k, 4), st.just(k))))
def test_koszul_alternating_count(nk):
    n, k = nk
    terms = koszul(tuple(range(k)), (0,) * n)
    alt = sum((-1) ** s * len(t) for s, t in enumerate(terms))
    assert alt == (1 if k == 0 else 0)


@given(labels, labels)
def test_compare_antisymmetric(a, b):
    if len(a) != len(b):
        return
    x, y = compare_pairs(decode(a), decode(b)), compare_pairs(decode(b), decode(a))
    flip = {Order.GREATER: Order.LESS, Order.LESS: Order.GREATER}
    assert y is flip.get(x, x)


def test_json_forms():
    o = E((0, 2), (1, 0, -1), 2)
    assert E.from_json(o.to_json()) == o
    assert E.from_json({"a": [2, 1]}) == decode((2, 1))
    assert str(E((0,), (0, 0))) == "O_{{1},(0, 0)}"
