"""Equivariant cohomology of twisted stratum sheaves on U_Sigma.

Grading convention (the single place it is fixed): for a graded module M,
``M(e)_d = M_{e+d}``.  The sheaf ``O_K(e)`` is the sheaf of
``(S / <z_i : i in K>)(e)``, so at selected degree ``d`` it has a monomial
section ``z^m`` exactly when ``m = e + d`` satisfies ``m_i = 0`` on K and the
sign pattern of the chart.  Every other module goes through this file.

The Cech complex over the cover by maximal charts splits over fine degrees
``m``; the slice at ``m`` depends only on K and the negative set
``N = {i : m_i < 0}``.  Cohomology is therefore a sum over sign patterns of
(slice cohomology) x (number of selected degrees with that pattern).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from . import kernels
from .cache import active as _cache
from .fan import EMPTY, SimplicialComplex
from .lattice import NonFinite, count_points, points


@dataclass(frozen=True)
class WeightSelector:
    """Degrees ``d`` with ``free_rows d = target`` and ``row d = res (mod m)``."""

    size: int
    free_rows: tuple[tuple[int, ...], ...] = ()
    target: tuple[int, ...] = ()
    mod_rows: tuple[tuple[tuple[int, ...], int, int], ...] = ()

    def __post_init__(self):
        if len(self.target) != len(self.free_rows):
            raise ValueError("target length must match the number of free rows")
        for row in self.free_rows:
            if len(row) != self.size:
                raise ValueError(f"selector row {row} has length {len(row)}, expected {self.size}")
        for row, mod, _ in self.mod_rows:
            if len(row) != self.size:
                raise ValueError(f"modular row {row} has length {len(row)}, expected {self.size}")
            if mod < 2:
                raise ValueError("modulus must be >= 2")

    @classmethod
    def equivariant(cls, n):
        """Full (C*)^n-equivariance: only degree 0 is selected."""
        rows = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(n, rows, (0,) * n)

    @classmethod
    def unconstrained(cls, n):
        return cls(n)

    def with_target(self, target, residues=None):
        mods = self.mod_rows
        if residues is not None:
            mods = tuple((r, m, s) for (r, m, _), s in zip(self.mod_rows, residues))
        return WeightSelector(self.size, self.free_rows, tuple(target), mods)

    def on_monomials(self, twist):
        """Constraints on ``m = twist + d`` equivalent to selecting ``d``."""
        rhs = tuple(t + sum(a * b for a, b in zip(r, twist)) for r, t in zip(self.free_rows, self.target))
        mods = tuple(
            (r, m, (s + sum(a * b for a, b in zip(r, twist))) % m) for r, m, s in self.mod_rows
        )
        return self.free_rows, rhs, mods

    def to_json(self):
        return {
            "size": self.size,
            "free_rows": [list(r) for r in self.free_rows],
            "target": list(self.target),
            "mod_rows": [{"row": list(r), "mod": m, "residue": s} for r, m, s in self.mod_rows],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            int(data["size"]),
            tuple(tuple(int(x) for x in r) for r in data.get("free_rows", [])),
            tuple(int(x) for x in data.get("target", [0] * len(data.get("free_rows", [])))),
            tuple(
                (tuple(int(x) for x in m["row"]), int(m["mod"]), int(m.get("residue", 0)))
                for m in data.get("mod_rows", [])
            ),
        )


class Table:
    """Finite map degree -> nonnegative dimension, zeros dropped."""

    __slots__ = ("_d",)

    def __init__(self, data=None):
        d = {}
        for k, v in (data or {}).items():
            if v < 0:
                raise ValueError(f"negative dimension {v} in degree {k}")
            if v:
                d[int(k)] = int(v)
        self._d = dict(sorted(d.items()))

    def __getitem__(self, deg):
        return self._d.get(deg, 0)

    def items(self):
        return self._d.items()

    def __iter__(self):
        return iter(self._d)

    def __eq__(self, other):
        if isinstance(other, Table):
            return self._d == other._d
        if isinstance(other, dict):
            return self._d == Table(other)._d
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._d.items()))

    def __add__(self, other):
        out = dict(self._d)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return Table(out)

    def scaled(self, c):
        return Table({k: c * v for k, v in self._d.items()})

    def shifted(self, s):
        """Degrees moved by ``s`` (so ``shifted(1)[r+1] == self[r]``)."""
        return Table({k + s: v for k, v in self._d.items()})

    def is_zero(self):
        return not self._d

    def euler(self) -> int:
        return sum((-1) ** k * v for k, v in self._d.items())

    def as_dict(self):
        return dict(self._d)

    def to_json(self):
        return {str(k): v for k, v in self._d.items()}

    @classmethod
    def from_json(cls, data):
        return cls({int(k): v for k, v in data.items()})

    def __repr__(self):
        return "{" + ", ".join(f"{k}: {v}" for k, v in self._d.items()) + "}"


CohomologyTable = Table


@dataclass(frozen=True)
class TwistedStratumSheaf:
    ambient: SimplicialComplex
    support: tuple[int, ...]
    twist: tuple[int, ...]

    def __post_init__(self):
        if len(self.twist) != self.ambient.n:
            raise ValueError(f"twist has length {len(self.twist)}, expected {self.ambient.n}")
        object.__setattr__(self, "support", tuple(sorted(set(self.support))))
        if any(i < 0 or i >= self.ambient.n for i in self.support):
            raise ValueError("support index out of range")


def _mask(idx):
    return sum(1 << i for i in idx)


@lru_cache(maxsize=1 << 18)
def pattern_table(complex_: SimplicialComplex, k_mask: int, n_mask: int) -> tuple[int, ...]:
    """Cech cohomology of one fine-degree slice (see module docstring)."""
    return kernels.cech_pattern(complex_.masks, k_mask, n_mask)


def _chart_bounds(n, support, tau):
    lo, hi = [], []
    for i in range(n):
        if i in support:
            lo.append(0)
            hi.append(0)
        elif i in tau:
            lo.append(0)
            hi.append(None)
        else:
            lo.append(None)
            hi.append(None)
    return lo, hi


def selected_degrees(sheaf: TwistedStratumSheaf, sel: WeightSelector, face):
    """Selected degrees with a monomial section on the chart of ``face``.

    Raises NonFinite when the chart's weight fiber is infinite.
    """
    face = set(face)
    if not set(sheaf.support) <= face:
        return []
    n = sheaf.ambient.n
    rows, rhs, mods = sel.on_monomials(sheaf.twist)
    lo, hi = _chart_bounds(n, set(sheaf.support), face)
    try:
        ms = points(rows, rhs, mods, lo, hi)
    except NonFinite as exc:
        raise NonFinite(exc.ray, f"chart {sorted(i + 1 for i in face)}") from None
    return [tuple(m - e for m, e in zip(mm, sheaf.twist)) for mm in ms]


def _determined(sel: WeightSelector) -> bool:
    from .linalg import rank_exact

    return bool(sel.free_rows) and rank_exact(sel.free_rows) == sel.size


def graded_cohomology(sheaf: TwistedStratumSheaf, sel: WeightSelector) -> Table:
    """Dimensions of the selected part of H^*(U_Sigma, O_K(e))."""
    cx = sheaf.ambient
    if sel.size != cx.n:
        raise ValueError(f"selector acts on {sel.size} coordinates, space has {cx.n}")
    if not cx.is_face(sheaf.support):
        return Table()
    key = {
        "kind": "cohomology",
        "complex": cx.to_json(),
        "K": list(sheaf.support),
        "twist": list(sheaf.twist),
        "selector": sel.to_json(),
    }
    cache = _cache()
    hit = cache.get(key)
    if hit is not None:
        return Table.from_json(hit)
    table = _graded_cohomology(sheaf, sel)
    cache.put(key, table.to_json())
    return table


def _graded_cohomology(sheaf, sel):
    cx = sheaf.ambient
    n = cx.n
    support = set(sheaf.support)
    k_mask = _mask(support)
    rows, rhs, mods = sel.on_monomials(sheaf.twist)
    dims: dict[int, int] = {}

    def add(pattern, times):
        for deg, d in enumerate(pattern):
            if d:
                dims[deg] = dims.get(deg, 0) + d * times

    if _determined(sel):
        for m in points(rows, rhs, mods, [None] * n, [None] * n):
            if any(m[i] for i in support):
                continue
            add(pattern_table(cx, k_mask, _mask(i for i in range(n) if m[i] < 0)), 1)
        return Table(dims)

    rest = [i for i in range(n) if i not in support]
    for size in range(len(rest) + 1):
        for neg in combinations(rest, size):
            pat = pattern_table(cx, k_mask, _mask(neg))
            if not any(pat):
                continue
            negs = set(neg)
            lo = [0 if (i in support or i not in negs) else None for i in range(n)]
            hi = [0 if i in support else (-1 if i in negs else None) for i in range(n)]
            try:
                c = count_points(rows, rhs, mods, lo, hi)
            except NonFinite as exc:
                raise NonFinite(exc.ray, f"sign pattern N={sorted(i + 1 for i in negs)}") from None
            if c:
                add(pat, c)
    return Table(dims)


def graded_cohomology_big(sheaf: TwistedStratumSheaf, sel: WeightSelector) -> Table:
    """Same table from one Cech complex over all selected degrees at once.

    Needs every chart's weight fiber to be finite; used to cross-check the
    per-pattern decomposition.
    """
    cx = sheaf.ambient
    if not cx.is_face(sheaf.support):
        return Table()
    faces = cx.max_faces
    m = len(faces)
    levels = []
    for p in range(m):
        basis = []
        for sub in combinations(range(m), p + 1):
            tau = set(faces[sub[0]]).intersection(*(faces[j] for j in sub[1:]))
            for d in selected_degrees(sheaf, sel, tau):
                basis.append((sub, d))
        levels.append(basis)
    index = [{b: j for j, b in enumerate(lv)} for lv in levels]
    ranks = [0] * m
    for p in range(m - 1):
        if not levels[p] or not levels[p + 1]:
            continue
        rows = []
        for sub, d in levels[p + 1]:
            row = [0] * len(levels[p])
            for k in range(len(sub)):
                j = index[p].get((sub[:k] + sub[k + 1 :], d))
                if j is not None:
                    row[j] = -1 if k & 1 else 1
            rows.append(row)
        ranks[p] = kernels.rank(rows, len(levels[p]))
    return Table(
        {p: len(levels[p]) - ranks[p] - (ranks[p - 1] if p else 0) for p in range(m)}
    )


def euler_characteristic(sheaf: TwistedStratumSheaf, sel: WeightSelector) -> int:
    return graded_cohomology(sheaf, sel).euler()


def stratum_is_empty(complex_: SimplicialComplex, support) -> bool:
    from .fan import stratum_complex

    return stratum_complex(complex_, support) is EMPTY
