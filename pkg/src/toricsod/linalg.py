"""Exact linear algebra over Z and Q on small dense matrices."""

from __future__ import annotations

from fractions import Fraction

from . import kernels


def rank_exact(rows) -> int:
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return 0
    return kernels.rank(rows, len(rows[0]))


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def solve_exact(a, b):
    """A particular rational solution of ``a x = b`` (free variables 0), or None."""
    if not a:
        return None
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, piv = rref(aug)
    n = len(a[0])
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return x


def nullspace(rows, ncols: int):
    """Basis of the rational null space, as lists of Fractions."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(red, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def primitive(v):
    """Scale a rational vector to a primitive integer vector."""
    from math import gcd, lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def smith_invariants(rows):
    """Nonzero invariant factors of an integer matrix (uses sympy)."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    out = []
    for i in range(min(snf.shape)):
        if snf[i, i] != 0:
            out.append(int(snf[i, i]))
    return out


_PRIME = 2147483629  # largest prime below 2**31


def solve_integer(a, b):
    """Integer solution of ``a x = b`` if one with small entries exists.

    Solves modulo a 31-bit prime (pivot columns chosen there, free variables
    set to 0), lifts residues symmetrically and verifies the lift exactly
    over Z.  Falls back to exact rational elimination when the lift fails;
    returns a list of Fractions, or None if the system is inconsistent.
    """
    import numpy as np

    if not a:
        return None
    p = _PRIME
    m = np.array(a, dtype=np.int64) % p
    rhs = np.array(b, dtype=np.int64) % p
    aug = np.concatenate([m, rhs[:, None]], axis=1)
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(aug[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            aug[[r, piv]] = aug[[piv, r]]
        inv = pow(int(aug[r, c]), p - 2, p)
        aug[r] = (aug[r] * inv) % p
        col = aug[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            # row ops in int64 are safe: entries < 2**31, products < 2**62
            aug[nzr] = (aug[nzr] - (col[nzr, None] * aug[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    x = [0] * ncols
    for i, c in enumerate(pivots):
        v = int(aug[i, ncols])
        x[c] = v - p if v > p // 2 else v
    ok = all(sum(int(aij) * xj for aij, xj in zip(row, x)) == int(bi) for row, bi in zip(a, b))
    if ok:
        return [Fraction(v) for v in x]
    return solve_exact(a, b)
