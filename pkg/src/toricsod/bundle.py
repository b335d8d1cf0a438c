"""Split toric stack bundles E = [(P x_{(C*)^n} U_Sigma) / G] over a toric base.

Coordinates on the total space list the base block first.  A degree on the
total space is selected when its fiber part vanishes (torus-equivariance
along the fiber) and its base-group weight ``W_B d_B + C d_F`` vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .cech import Table, WeightSelector
from .ext import ext
from .fan import FanError, SimplicialComplex, StackyPresentation, join
from .linalg import rref
from .objects import ExceptionalObject, Order, compare_pairs, decode
from .sod import line_bundle
from .space import Space


@dataclass(frozen=True)
class BundleSpec:
    base: StackyPresentation
    fiber: SimplicialComplex
    twist: tuple[tuple[int, ...], ...]
    name: str = "bundle"

    def __post_init__(self):
        r_b = len(self.base.weights)
        if len(self.twist) != r_b:
            raise FanError(f"twist has {len(self.twist)} rows, base group has {r_b}")
        for row in self.twist:
            if len(row) != self.fiber.n:
                raise FanError(f"twist row {row} has length {len(row)}, fiber has {self.fiber.n} coordinates")
        if not self.base.is_injective():
            raise FanError("base presentation is not injective")

    def to_json(self):
        return {
            "name": self.name,
            "base": self.base.to_json(),
            "fiber": self.fiber.to_json(),
            "twist": [list(r) for r in self.twist],
        }

    @classmethod
    def from_json(cls, data):
        base = StackyPresentation.from_json(data["base"])
        fiber = SimplicialComplex.from_json(data["fiber"])
        twist = tuple(tuple(int(x) for x in r) for r in data.get("twist", [[0] * fiber.n] * len(base.weights)))
        return cls(base, fiber, twist, data.get("name", "bundle"))


@dataclass(frozen=True)
class TotalSpace(Space):
    spec: BundleSpec = None

    @property
    def n_base(self) -> int:
        return self.spec.base.complex.n

    @property
    def n_fiber(self) -> int:
        return self.spec.fiber.n

    def base_space(self) -> Space:
        """The base itself, with plain (non-equivariant) sheaves."""
        return _base_space(self.spec)


@lru_cache(maxsize=64)
def _base_space(spec: BundleSpec) -> Space:
    return Space.from_presentation(spec.name + ":base", spec.base)


def build(spec: BundleSpec) -> TotalSpace:
    nb, nf = spec.base.complex.n, spec.fiber.n
    rows = [tuple(int(nb + j == k) for k in range(nb + nf)) for j in range(nf)]
    for w, c in zip(spec.base.weights, spec.twist):
        rows.append(tuple(w) + tuple(c))
    # finite base factors act on the fiber trivially in this model
    mods = tuple((tuple(r) + (0,) * nf, m, 0) for r, m in spec.base.torsion)
    sel = WeightSelector(nb + nf, tuple(rows), (0,) * len(rows), mods)
    return TotalSpace(spec.name, join(spec.base.complex, spec.fiber), sel, spec)


def lift_object(total: TotalSpace, E: ExceptionalObject) -> ExceptionalObject:
    """Flat family over the base with fiber E: support and twist sit in the fiber block."""
    if E.n != total.n_fiber:
        raise ValueError(f"object has {E.n} coordinates, fiber has {total.n_fiber}")
    nb = total.n_base
    return ExceptionalObject(tuple(i + nb for i in E.I), (0,) * nb + E.p, E.shift)


def _pivot_columns(weights):
    if not weights:
        return []
    _, piv = rref([list(r) for r in weights])
    return piv


def canonical_base(total: TotalSpace, d_b) -> tuple[int, ...]:
    return _canonical_base(total.spec.base, tuple(int(x) for x in d_b))


@lru_cache(maxsize=1 << 16)
def _canonical_base(base: StackyPresentation, d_b) -> tuple[int, ...]:
    """Representative of d_B's weight class supported on the earliest pivot columns.

    Falls back to d_B itself when that representative is not integral or a
    finite factor would see a different residue.
    """
    if not base.weights:
        return d_b
    w = [sum(a * b for a, b in zip(r, d_b)) for r in base.weights]
    piv = _pivot_columns(base.weights)
    aug = [[Fraction(r[c]) for c in piv] + [Fraction(x)] for r, x in zip(base.weights, w)]
    red, p2 = rref(aug)
    if p2 and p2[-1] == len(piv):
        return d_b
    sol = [Fraction(0)] * len(piv)
    for row, c in zip(red, p2):
        sol[c] = row[-1]
    if any(v.denominator != 1 for v in sol):
        return d_b
    out = [0] * len(d_b)
    for c, v in zip(piv, sol):
        out[c] = int(v)
    for row, m in base.torsion:
        if (sum(a * b for a, b in zip(row, out)) - sum(a * b for a, b in zip(row, d_b))) % m:
            return d_b
    return tuple(out)


def base_twist(total: TotalSpace, d_b) -> tuple[int, ...]:
    """Extra twist for ext: phi^* O_B(d_B), canonicalized."""
    if len(d_b) != total.n_base:
        raise ValueError(f"base twist has length {len(d_b)}, base has {total.n_base} coordinates")
    return canonical_base(total, d_b) + (0,) * total.n_fiber


@dataclass
class BundleReport:
    space: str
    labels: list
    base_twists: list
    zero_objects: list = field(default_factory=list)
    asserted: int = 0
    failures: list = field(default_factory=list)
    ties: list = field(default_factory=list)
    block_mismatches: list = field(default_factory=list)
    blocks_checked: int = 0
    exceptional: dict = field(default_factory=dict)
    base_euler: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.block_mismatches and all(self.exceptional.values())

    def to_json(self):
        return {
            "space": self.space,
            "labels": [list(a) for a in self.labels],
            "base_twists": [list(t) for t in self.base_twists],
            "zero_objects": [list(a) for a in self.zero_objects],
            "asserted": self.asserted,
            "failures": self.failures,
            "ties": self.ties,
            "block_mismatches": self.block_mismatches,
            "blocks_checked": self.blocks_checked,
            "exceptional": {",".join(map(str, a)): ok for a, ok in self.exceptional.items()},
            "base_euler": self.base_euler,
            "ok": self.ok,
        }


def base_twists(total: TotalSpace, lo, hi):
    """Canonical base twists with entries in [lo, hi] on the pivot coordinates."""
    piv = _pivot_columns(total.spec.base.weights) if total.spec.base.weights else range(total.n_base)
    seen = set()
    for vals in product(range(lo, hi + 1), repeat=len(piv)):
        d = [0] * total.n_base
        for c, v in zip(piv, vals):
            d[c] = v
        seen.add(base_twist(total, d))
    return sorted(seen)


def verify_theorem(total: TotalSpace, labels, base_window=(-2, 2), order=compare_pairs, oracle=False) -> BundleReport:
    """Vanishing across blocks and Hom-level block identification with the base."""
    twists = base_twists(total, *base_window)
    rep = BundleReport(total.name, [], twists)
    objs = []
    for a in labels:
        E = decode(a)
        lifted = lift_object(total, E)
        if not total.complex.is_face(lifted.I):
            rep.zero_objects.append(tuple(a))
            continue
        rep.labels.append(tuple(a))
        objs.append(lifted)

    for i, A in enumerate(objs):
        for j, B in enumerate(objs):
            if i == j:
                rep.exceptional[rep.labels[i]] = ext(total, A, B, check=oracle) == {0: 1}
                continue
            verdict = order(decode(rep.labels[i]), decode(rep.labels[j]))
            if verdict not in (Order.GREATER, Order.TIE):
                continue
            for tw in twists:
                t = ext(total, A, B, tw, check=oracle)
                entry = {"a": list(rep.labels[i]), "b": list(rep.labels[j]), "base_twist": list(tw), "ext": t.to_json()}
                if verdict is Order.GREATER:
                    rep.asserted += 1
                    if not t.is_zero():
                        rep.failures.append(entry)
                elif not t.is_zero():
                    rep.ties.append(entry)

    base = total.base_space()
    nb = total.n_base
    for i, A in enumerate(objs):
        for t1 in twists:
            for t2 in twists:
                d1, d2 = t1[:nb], t2[:nb]
                want = ext(base, line_bundle(d1), line_bundle(d2), check=oracle)
                got = ext(total, A, A, tuple(b - a for a, b in zip(t1, t2)), check=oracle)
                rep.blocks_checked += 1
                if got != want:
                    rep.block_mismatches.append(
                        {"a": list(rep.labels[i]), "L1": list(d1), "L2": list(d2), "total": got.to_json(), "base": want.to_json()}
                    )
    rep.base_euler = base_pair_euler(base)
    return rep


def base_pair_euler(base: Space, d=None):
    """Euler matrix of (O, O(d)) on the base; d defaults to O(1) on the first coordinate."""
    n = base.n
    d = tuple(d) if d is not None else (1,) + (0,) * (n - 1)
    objs = [line_bundle((0,) * n), line_bundle(d)]
    return [[ext(base, a, b).euler() for b in objs] for a in objs]


def hirzebruch(a: int) -> BundleSpec:
    """F_a = P(O + O(-a)) over P^1."""
    p1 = SimplicialComplex.from_faces(2, [(0,), (1,)])
    return BundleSpec(StackyPresentation(p1, ((1, 1),)), p1, ((0, -a),), f"F{a}")


def weighted_bundle() -> BundleSpec:
    """A P(1,2)-fiber bundle over P^1; the fiber weights enter through the twist."""
    p1 = SimplicialComplex.from_faces(2, [(0,), (1,)])
    return BundleSpec(StackyPresentation(p1, ((1, 1),)), p1, ((1, 2),), "P(1,2)-bundle")
