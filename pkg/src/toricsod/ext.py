"""Graded Ext tables between stratum objects, computed two independent ways.

Route A is the closed sum over Koszul summands,
``Ext^r = sum over I-J <= S <= I of H^{r-|S|}(O_{I u J}(p - q + chi_S + e))``.
Route B builds the total complex of Cech(Hom(K(A), O_{J,q}(e))) cell by
cell and takes exact ranks; it is the oracle for route A.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

from . import kernels
from .cech import Table, TwistedStratumSheaf, WeightSelector, graded_cohomology
from .fan import SimplicialComplex
from .lattice import NonFinite, count_points
from .objects import ExceptionalObject, chi, koszul_sign

ExtTable = Table


class OracleDisagreement(AssertionError):
    """Route A and route B produced different tables."""

    def __init__(self, a, b, formula: Table, oracle: Table):
        self.a, self.b, self.formula, self.oracle = a, b, formula, oracle
        super().__init__(f"Ext({a}, {b}): formula {formula!r} != oracle {oracle!r}")


def _parts(space, sel):
    cx = getattr(space, "complex", space)
    if sel is None:
        sel = getattr(space, "selector", None) or WeightSelector.equivariant(cx.n)
    return cx, sel


def _base(A, B, e):
    n = A.n
    e = tuple(e) if e is not None else (0,) * n
    if B.n != n or len(e) != n:
        raise ValueError("objects and twist must share the ambient size")
    return tuple(p - q + x for p, q, x in zip(A.p, B.p, e))


def ext_formula(space, A: ExceptionalObject, B: ExceptionalObject, extra_twist=None, sel=None) -> Table:
    """Route A: the Koszul sum with only the r = s terms surviving."""
    cx, sel = _parts(space, sel)
    x = _base(A, B, extra_twist)
    I, J = set(A.I), set(B.I)
    union = tuple(sorted(I | J))
    out = Table()
    if not cx.is_face(union):
        return out
    forced = I - J
    optional = sorted(I & J)
    for k in range(len(optional) + 1):
        for extra in combinations(optional, k):
            S = forced | set(extra)
            tw = tuple(a + b for a, b in zip(x, chi(S, cx.n)))
            h = graded_cohomology(TwistedStratumSheaf(cx, union, tw), sel)
            out = out + h.shifted(len(S))
    return out.shifted(A.shift - B.shift)


# ---- route B -------------------------------------------------------------

_NEG2, _NEG1, _NONNEG, _NEG, _ZERO = range(5)
_INTERVAL = {_NEG2: (None, -2), _NEG1: (-1, -1), _NONNEG: (0, None), _NEG: (None, -1), _ZERO: (0, 0)}
_REP = {_NEG2: -2, _NEG1: -1, _NONNEG: 0, _NEG: -1, _ZERO: 0}


def _classes(i, I, J):
    """Intervals of y_i on which the slice complex is constant."""
    if i in I and i in J:
        return (_NEG1, _ZERO)
    if i in J:
        return (_ZERO,)
    if i in I:
        return (_NEG2, _NEG1, _NONNEG)
    return (_NEG, _NONNEG)


@lru_cache(maxsize=1 << 16)
def _slice(cx: SimplicialComplex, I: tuple, J: tuple, y: tuple) -> tuple[int, ...]:
    """Cohomology of the total complex at fine degree ``y = x + d``.

    Slot (S, c) is the monomial z^(y + chi_S) on the Cech cochain c; it is
    present iff J lies in the chart tau(c), the J-coordinates vanish and the
    tau-coordinates outside J are nonnegative.
    """
    n = cx.n
    faces = cx.max_faces
    Jset = set(J)
    cochains = []
    for size in range(1, len(faces) + 1):
        for c in combinations(range(len(faces)), size):
            tau = set(faces[c[0]]).intersection(*(faces[j] for j in c[1:]))
            if Jset <= tau:
                cochains.append((c, tau))
    slots_by_deg: dict[int, list] = {}
    for s in range(len(I) + 1):
        for S in combinations(I, s):
            m = [a + b for a, b in zip(y, chi(S, n))]
            if any(m[i] for i in J):
                continue
            for c, tau in cochains:
                if all(m[i] >= 0 for i in tau if i not in Jset):
                    slots_by_deg.setdefault(s + len(c) - 1, []).append((S, c))
    if not slots_by_deg:
        return ()
    index = {d: {slot: k for k, slot in enumerate(v)} for d, v in slots_by_deg.items()}
    top = max(slots_by_deg)
    ranks = {}
    for d in range(min(slots_by_deg), top):
        src, dst = slots_by_deg.get(d), slots_by_deg.get(d + 1)
        if not src or not dst:
            ranks[d] = 0
            continue
        rows = []
        for S, c in dst:
            row = [0] * len(src)
            # Koszul part: e_{S - i} -> sign * z_i e_S
            for i in S:
                k = index[d].get((tuple(j for j in S if j != i), c))
                if k is not None:
                    row[k] += koszul_sign(i, S)
            # Cech part, twisted by (-1)^{|S|}
            if len(c) > 1:
                eps = -1 if len(S) % 2 else 1
                for pos in range(len(c)):
                    k = index[d].get((S, c[:pos] + c[pos + 1 :]))
                    if k is not None:
                        row[k] += eps * (-1 if pos % 2 else 1)
            rows.append(row)
        ranks[d] = kernels.rank(rows, len(src))
    lo = min(0, min(slots_by_deg))
    dims = []
    for d in range(lo, top + 1):
        dims.append(len(slots_by_deg.get(d, ())) - ranks.get(d, 0) - ranks.get(d - 1, 0))
    return (lo,) + tuple(dims)


def ext_koszul(space, A: ExceptionalObject, B: ExceptionalObject, extra_twist=None, sel=None) -> Table:
    """Route B: exact ranks of the Koszul-Cech total complex."""
    cx, sel = _parts(space, sel)
    x = _base(A, B, extra_twist)
    n = cx.n
    I, J = A.I, B.I
    Iset, Jset = set(I), set(J)
    rows, rhs, mods = sel.on_monomials(x)
    dims: dict[int, int] = {}
    for cell in product(*(_classes(i, Iset, Jset) for i in range(n))):
        y = tuple(_REP[c] for c in cell)
        sl = _slice(cx, I, J, y)
        if not any(sl[1:]):
            continue
        lo = [_INTERVAL[c][0] for c in cell]
        hi = [_INTERVAL[c][1] for c in cell]
        try:
            count = count_points(rows, rhs, mods, lo, hi)
        except NonFinite as exc:
            raise NonFinite(exc.ray, f"Ext({A}, {B})") from None
        if not count:
            continue
        for k, dim in enumerate(sl[1:]):
            if dim:
                deg = sl[0] + k
                dims[deg] = dims.get(deg, 0) + dim * count
    return Table(dims).shifted(A.shift - B.shift)


# ---- Gram matrices -------------------------------------------------------


@dataclass
class GramMatrix:
    objects: list
    tables: list[list[Table]]
    checked: set = field(default_factory=set)

    @property
    def euler(self) -> list[list[int]]:
        return [[t.euler() for t in row] for row in self.tables]

    def __len__(self):
        return len(self.objects)


def ext(space, A, B, extra_twist=None, sel=None, check=False) -> Table:
    """Route A, optionally confirmed by route B."""
    t = ext_formula(space, A, B, extra_twist, sel)
    if check:
        o = ext_koszul(space, A, B, extra_twist, sel)
        if o != t:
            raise OracleDisagreement(A, B, t, o)
    return t


def gram(space, objects, sel=None, oracle_fraction=0.0, seed=0, extra_twist=None) -> GramMatrix:
    """All pairwise tables; a seeded ``oracle_fraction`` of entries is re-derived by route B."""
    objs = list(objects)
    rng = random.Random(seed)
    tables, checked = [], set()
    for i, a in enumerate(objs):
        row = []
        for j, b in enumerate(objs):
            check = oracle_fraction >= 1 or rng.random() < oracle_fraction
            row.append(ext(space, a, b, extra_twist, sel, check=check))
            if check:
                checked.add((i, j))
        tables.append(row)
    return GramMatrix(objs, tables, checked)
