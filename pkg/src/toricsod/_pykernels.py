"""Pure-Python versions of the hot kernels.

These are the reference implementations; ``_ckernels.pyx`` mirrors them
with machine integers and falls back here on overflow.
"""

from __future__ import annotations


def rank(rows, ncols):
    """Exact rank over Q of an integer matrix given as a list of rows.

    Fraction-free (Bareiss) elimination, so every intermediate value is a
    minor of the input and stays an integer.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            m[p], m[r] = m[r], m[p]
        piv = m[r][c]
        prow = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            a = row[c]
            if a == 0:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - a * prow[j]) // prev
            row[c] = 0
        prev = piv
        r += 1
    return r


def _popcount(x):
    return bin(x).count("1")


def cech_pattern(face_masks, k_mask, n_mask):
    """Cech cohomology dimensions of one fine-degree slice.

    ``face_masks`` are the maximal faces as bitmasks.  A chart intersection
    (a nonempty set of maximal faces, meet ``tau``) carries a one-dimensional
    term iff ``k_mask`` is contained in ``tau`` and ``tau`` avoids ``n_mask``.
    Returns a tuple of dimensions indexed by Cech degree.
    """
    m = len(face_masks)
    full = (1 << m) - 1
    levels = [[] for _ in range(m)]
    for sub in range(1, full + 1):
        tau = -1
        s = sub
        i = 0
        while s:
            if s & 1:
                tau &= face_masks[i]
            s >>= 1
            i += 1
        if (tau & k_mask) == k_mask and (tau & n_mask) == 0:
            levels[_popcount(sub) - 1].append(sub)
    index = [{sub: j for j, sub in enumerate(lv)} for lv in levels]
    ranks = [0] * m
    for p in range(m - 1):
        src, dst = levels[p], levels[p + 1]
        if not src or not dst:
            continue
        rows = []
        for sub in dst:
            row = [0] * len(src)
            k = 0
            for bit in range(m):
                if sub >> bit & 1:
                    face = sub & ~(1 << bit)
                    j = index[p].get(face)
                    if j is not None:
                        row[j] = -1 if k & 1 else 1
                    k += 1
            rows.append(row)
        ranks[p] = rank(rows, len(src))
    dims = []
    for p in range(m):
        d = len(levels[p]) - ranks[p] - (ranks[p - 1] if p else 0)
        dims.append(d)
    while dims and dims[-1] == 0:
        dims.pop()
    return tuple(dims)
