"""Windowed verdicts: exceptionality, ordered vanishing, ties and spanning."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .cech import Table
from .ext import ext, ext_koszul
from .objects import ExceptionalObject, Order, compare_pairs, decode


def window(n, bounds):
    """All labels in the box, lex descending.

    ``bounds`` is one ``(lo, hi)`` pair for every axis or a list of n pairs.
    """
    if n and bounds and isinstance(bounds[0], int):
        bounds = [tuple(bounds)] * n
    ranges = [range(lo, hi + 1) for lo, hi in bounds]
    return sorted(product(*ranges), reverse=True)


@dataclass
class PairResult:
    a: tuple
    b: tuple
    order: Order
    table: Table

    def to_json(self):
        return {"a": list(self.a), "b": list(self.b), "order": self.order.value, "ext": self.table.to_json()}


@dataclass
class SodReport:
    space: str
    labels: list
    zero_objects: list = field(default_factory=list)
    exceptional: dict = field(default_factory=dict)
    vanishing_failures: list = field(default_factory=list)
    asserted: int = 0
    ties: list = field(default_factory=list)
    histogram: dict = field(default_factory=dict)
    euler: list = field(default_factory=list)
    checked: int = 0

    @property
    def exceptional_ok(self) -> bool:
        return all(self.exceptional.values())

    @property
    def ok(self) -> bool:
        return self.exceptional_ok and not self.vanishing_failures

    def unitriangular(self) -> bool:
        """Unit diagonal and zeros above it in label order (necessary for fullness)."""
        m = self.euler
        return all(m[i][i] == 1 for i in range(len(m))) and all(
            m[i][j] == 0 for i in range(len(m)) for j in range(len(m)) if compare_pairs(
                decode(self.labels[i]), decode(self.labels[j])) is Order.GREATER
        )

    def to_json(self):
        return {
            "space": self.space,
            "labels": [list(a) for a in self.labels],
            "zero_objects": [list(a) for a in self.zero_objects],
            "exceptional": {",".join(map(str, a)): ok for a, ok in self.exceptional.items()},
            "asserted_pairs": self.asserted,
            "vanishing_failures": [p.to_json() for p in self.vanishing_failures],
            "ties": [p.to_json() for p in self.ties],
            "degree_histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "euler": self.euler,
            "oracle_checked": self.checked,
            "ok": self.ok,
        }


def _is_zero(space, obj: ExceptionalObject) -> bool:
    return not space.complex.is_face(obj.I)


def check_sod(space, labels, sel=None, oracle_fraction=0.0, extra_twist=None, order=compare_pairs) -> SodReport:
    """Exceptionality, vanishing of every Greater pair, and tie observations.

    Labels whose support is not a face decode to the zero object; they are
    listed apart and kept out of every assertion.
    """
    import random

    rng = random.Random(0)
    rep = SodReport(getattr(space, "name", "space"), [])
    objs = []
    for a in labels:
        o = decode(a)
        if _is_zero(space, o):
            rep.zero_objects.append(tuple(a))
        else:
            rep.labels.append(tuple(a))
            objs.append(o)

    def table(a, b):
        check = oracle_fraction >= 1 or (oracle_fraction > 0 and rng.random() < oracle_fraction)
        if check:
            rep.checked += 1
        return ext(space, a, b, extra_twist, sel, check=check)

    size = len(objs)
    rep.euler = [[0] * size for _ in range(size)]
    for i, A in enumerate(objs):
        for j, B in enumerate(objs):
            t = table(A, B)
            rep.euler[i][j] = t.euler()
            for deg, dim in t.items():
                rep.histogram[deg] = rep.histogram.get(deg, 0) + dim
            if i == j:
                rep.exceptional[rep.labels[i]] = t == {0: 1}
                continue
            verdict = order(A, B)
            if verdict is Order.GREATER:
                rep.asserted += 1
                if not t.is_zero():
                    rep.vanishing_failures.append(PairResult(rep.labels[i], rep.labels[j], verdict, t))
            elif verdict is Order.TIE:
                rep.ties.append(PairResult(rep.labels[i], rep.labels[j], verdict, t))
    return rep


def lex_ascending(A, B):
    """Deliberately reversed order, for negative controls."""
    o = compare_pairs(A, B)
    return {Order.GREATER: Order.LESS, Order.LESS: Order.GREATER}.get(o, o)


@dataclass
class SpanReport:
    detected: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    zero_probes: list = field(default_factory=list)

    @property
    def failures(self):
        return [p for p, ok in self.detected.items() if not ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self):
        return {
            "detected": {str(p): ok for p, ok in self.detected.items()},
            "witnesses": {str(p): w for p, w in self.witnesses.items()},
            "zero_probes": [str(p) for p in self.zero_probes],
            "ok": self.ok,
        }


def line_bundle(d) -> ExceptionalObject:
    """O(d) as a stratum object: empty support, generator in degree -d."""
    return ExceptionalObject((), tuple(-x for x in d))


def spanning_detect(space, family, probes, sel=None, oracle=False) -> SpanReport:
    """Which probes have a nonzero Ext from some family member.

    ``family`` holds objects or ``(object, extra_twist)`` pairs.
    """
    rep = SpanReport()
    members = [f if isinstance(f, tuple) else (f, None) for f in family]
    for probe in probes:
        key = str(probe)
        if _is_zero(space, probe):
            rep.zero_probes.append(key)
            continue
        rep.detected[key] = False
        for F, tw in members:
            t = (ext_koszul if oracle else ext)(space, F, probe, tw, sel)
            if not t.is_zero():
                rep.detected[key] = True
                rep.witnesses[key] = {"member": str(F), "twist": list(tw) if tw else None, "ext": t.to_json()}
                break
    return rep


def stratum_probes(space, p=None, include_zero=False):
    """O_{K,p} for every face K (p defaults to 0); every subset K with include_zero."""
    from itertools import combinations

    n = space.n
    p = tuple(p) if p is not None else (0,) * n
    if include_zero:
        supports = [K for k in range(n + 1) for K in combinations(range(n), k)]
    else:
        supports = sorted(space.complex.faces(), key=lambda f: (len(f), f))
    return [ExceptionalObject(K, p) for K in supports]

