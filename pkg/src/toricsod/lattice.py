"""Exact lattice-point counting in polyhedra cut out by a weight selector.

The polyhedra here are always ``{x : A x = b, lo <= x <= hi}`` with some
bounds infinite, intersected with congruence conditions.  Finiteness is
certified, never assumed: an unbounded region raises :class:`NonFinite`
carrying an explicit nonzero integer recession ray.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .linalg import nullspace, primitive, rref, solve_exact


class NonFinite(ArithmeticError):
    """Infinitely many lattice points; ``ray`` is a recession direction."""

    def __init__(self, ray, context=""):
        self.ray = tuple(ray)
        self.context = context
        msg = f"infinite weight fiber along ray {self.ray}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


def _key(rows, rhs, mods, lo, hi):
    return (
        tuple(tuple(r) for r in rows),
        tuple(rhs),
        tuple((tuple(r), m, s) for r, m, s in mods),
        tuple(lo),
        tuple(hi),
    )


def count_points(rows, rhs, mods, lo, hi) -> int:
    """Number of integer x with ``rows x = rhs``, congruences and box bounds.

    ``mods`` is a sequence of ``(row, modulus, residue)``; ``lo``/``hi`` hold
    ints or None for an infinite side.
    """
    return _count(_key(rows, rhs, mods, lo, hi))


def points(rows, rhs, mods, lo, hi):
    """Sorted list of the integer points (same contract as count_points)."""
    return list(_enumerate(_key(rows, rhs, mods, lo, hi)))


@lru_cache(maxsize=1 << 16)
def _count(key) -> int:
    return sum(1 for _ in _enumerate(key))


def recession_ray(rows, lo, hi):
    """A nonzero integer ray of the recession cone, or None if it is zero.

    The cone is ``{y : rows y = 0, y_i = 0 where both bounds are finite,
    y_i >= 0 where only lo is finite, y_i <= 0 where only hi is finite}``.
    Any nonzero such cone contains a conformal circuit of the row matrix, so
    scanning supports by increasing size is exhaustive.
    """
    n = len(lo)
    unbounded = [i for i in range(n) if lo[i] is None or hi[i] is None]
    sign = {}
    for i in unbounded:
        if lo[i] is None and hi[i] is None:
            sign[i] = 0
        elif hi[i] is None:
            sign[i] = 1
        else:
            sign[i] = -1
    nonzero_rows = [r for r in rows if any(r)]
    for size in range(1, len(unbounded) + 1):
        for supp in combinations(unbounded, size):
            sub = [[r[i] for i in supp] for r in nonzero_rows]
            basis = nullspace(sub, size) if sub else (
                [[Fraction(1)]] if size == 1 else [[Fraction(1)] * size, [Fraction(0)] * size]
            )
            if len(basis) != 1:
                continue
            v = basis[0]
            if any(x == 0 for x in v):
                continue
            for s in (1, -1):
                if all(sign[i] == 0 or sign[i] * s * x > 0 for i, x in zip(supp, v)):
                    ray = [0] * n
                    for i, x in zip(supp, primitive([s * x for x in v])):
                        ray[i] = x
                    return tuple(ray)
    return None


def _enumerate(key):
    rows, rhs, mods, lo, hi = key
    n = len(lo)
    for i in range(n):
        if lo[i] is not None and hi[i] is not None and lo[i] > hi[i]:
            return
    fixed = {i: lo[i] for i in range(n) if lo[i] is not None and lo[i] == hi[i]}
    var = [i for i in range(n) if i not in fixed]
    sub_rows = []
    sub_rhs = []
    for r, b in zip(rows, rhs):
        rest = b - sum(r[i] * v for i, v in fixed.items())
        coeffs = [r[i] for i in var]
        if not any(coeffs):
            if rest != 0:
                return
            continue
        sub_rows.append(coeffs)
        sub_rhs.append(rest)

    def emit(xs):
        x = [0] * n
        for i, v in fixed.items():
            x[i] = v
        for i, v in zip(var, xs):
            x[i] = v
        for r, m, s in mods:
            if (sum(a * b for a, b in zip(r, x)) - s) % m:
                return None
        return tuple(x)

    if not var:
        x = emit(())
        if x is not None:
            yield x
        return

    red, piv = rref([list(r) + [b] for r, b in zip(sub_rows, sub_rhs)])
    if piv and piv[-1] == len(var):
        return
    vlo = [lo[i] for i in var]
    vhi = [hi[i] for i in var]
    if len(piv) == len(var):
        xs = [row[-1] for row in red]
        if all(x.denominator == 1 for x in xs) and all(
            (a is None or x >= a) and (b is None or x <= b) for x, a, b in zip(xs, vlo, vhi)
        ):
            x = emit([int(v) for v in xs])
            if x is not None:
                yield x
        return

    a_rows = [row[:-1] for row in red]
    b_vec = [row[-1] for row in red]
    ray = recession_ray(a_rows, vlo, vhi)
    if ray is not None:
        full = [0] * n
        for i, v in zip(var, ray):
            full[i] = v
        raise NonFinite(full)

    bounds = _vertex_bounds(a_rows, b_vec, vlo, vhi)
    if bounds is None:
        return
    blo, bhi = bounds
    free = [c for c in range(len(var)) if c not in piv]
    found = []
    for vals in product(*(range(blo[c], bhi[c] + 1) for c in free)):
        xs = [None] * len(var)
        for c, v in zip(free, vals):
            xs[c] = v
        ok = True
        for row, c in zip(red, piv):
            val = row[-1] - sum(row[f] * xs[f] for f in free)
            if val.denominator != 1 or val < blo[c] or val > bhi[c]:
                ok = False
                break
            xs[c] = int(val)
        if not ok:
            continue
        x = emit(xs)
        if x is not None:
            found.append(x)
    yield from sorted(found)


def _vertex_bounds(a_rows, b_vec, lo, hi):
    """Integer coordinate bounds of a bounded polyhedron from its vertices.

    Returns None when the polyhedron is empty.
    """
    n = len(lo)
    r = len(a_rows)
    best_lo = [None] * n
    best_hi = [None] * n
    seen = False
    for basis in combinations(range(n), r):
        nonbasic = [c for c in range(n) if c not in basis]
        choices = []
        for c in nonbasic:
            opts = [v for v in (lo[c], hi[c]) if v is not None]
            if lo[c] is not None and lo[c] == hi[c]:
                opts = [lo[c]]
            choices.append(opts)
        if any(not o for o in choices):
            continue
        mat = [[row[c] for c in basis] for row in a_rows]
        for vals in product(*choices):
            rhs = [
                b - sum(row[c] * v for c, v in zip(nonbasic, vals)) for row, b in zip(a_rows, b_vec)
            ]
            sol = solve_exact(mat, rhs) if r else []
            if sol is None:
                continue
            # a singular basis yields a non-unique point; the real vertex is
            # reached through some other nonsingular basis
            if r and any(sum(row[j] * sol[j] for j in range(r)) != rr for row, rr in zip(mat, rhs)):
                continue
            x = [Fraction(0)] * n
            for c, v in zip(basis, sol):
                x[c] = v
            for c, v in zip(nonbasic, vals):
                x[c] = Fraction(v)
            if any((lo[c] is not None and x[c] < lo[c]) or (hi[c] is not None and x[c] > hi[c]) for c in range(n)):
                continue
            seen = True
            for c in range(n):
                if best_lo[c] is None or x[c] < best_lo[c]:
                    best_lo[c] = x[c]
                if best_hi[c] is None or x[c] > best_hi[c]:
                    best_hi[c] = x[c]
    if not seen:
        return None
    from math import ceil, floor

    return [ceil(v) for v in best_lo], [floor(v) for v in best_hi]
