# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Machine-integer versions of the rank and Cech kernels.

Entries are int64; products are formed in 128 bits and every Bareiss
quotient is checked to fit back into int64.  On overflow the caller gets
``None`` and must retry with the pure-Python kernel.
"""

import numpy as np
cimport cython
cimport numpy as cnp

cnp.import_array()
from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    ctypedef long long int128 "__int128"

cdef int64_t I64_MAX = 9223372036854775807
cdef int64_t I64_MIN = -9223372036854775807 - 1


cdef int _rank_inplace(int64_t[:, ::1] m) nogil:
    """Return rank, or -1 on int64 overflow."""
    cdef Py_ssize_t nrows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef int64_t prev = 1, piv, a, tmp
    cdef int128 num, q
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and m[p, c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            for j in range(c, ncols):
                tmp = m[p, j]
                m[p, j] = m[r, j]
                m[r, j] = tmp
        piv = m[r, c]
        for i in range(r + 1, nrows):
            a = m[i, c]
            for j in range(c + 1, ncols):
                num = <int128>piv * m[i, j] - <int128>a * m[r, j]
                q = num // prev
                if q > I64_MAX or q < I64_MIN:
                    return -1
                m[i, j] = <int64_t>q
            m[i, c] = 0
        prev = piv
        r += 1
    return <int>r


def rank(rows, ncols):
    """Exact rank of an integer matrix; ``None`` if int64 overflowed."""
    cdef Py_ssize_t n = len(rows)
    if n == 0 or ncols == 0:
        return 0
    try:
        arr = np.array(rows, dtype=np.int64).reshape(n, ncols)
    except OverflowError:
        return None
    cdef int64_t[:, ::1] view = np.ascontiguousarray(arr)
    cdef int res
    with nogil:
        res = _rank_inplace(view)
    if res < 0:
        return None
    return res


cdef inline int _popcount(uint64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@cython.boundscheck(True)
def cech_pattern(face_masks, uint64_t k_mask, uint64_t n_mask):
    """Same contract as the pure-Python kernel; ``None`` on overflow."""
    cdef Py_ssize_t m = len(face_masks)
    if m > 24:
        return None
    cdef uint64_t[::1] faces = np.array(face_masks, dtype=np.uint64)
    cdef uint64_t full = (<uint64_t>1 << m) - 1
    cdef uint64_t sub, s, tau
    cdef Py_ssize_t i, p, k, bit, row
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pos = np.full(full + 1, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(m + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] members = np.zeros(full + 1, dtype=np.uint64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] starts = np.zeros(m + 2, dtype=np.int64)
    cdef int lvl

    # first pass: count admissible subsets per level
    for sub in range(1, full + 1):
        tau = ~(<uint64_t>0)
        s = sub
        i = 0
        while s:
            if s & 1:
                tau &= faces[i]
            s >>= 1
            i += 1
        if (tau & k_mask) == k_mask and (tau & n_mask) == 0:
            lvl = _popcount(sub) - 1
            pos[sub] = counts[lvl]
            counts[lvl] += 1
    # second pass: members grouped by level, in increasing bitmask order
    for p in range(m):
        starts[p + 1] = starts[p] + counts[p]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fill = starts.copy()
    for sub in range(1, full + 1):
        if pos[sub] >= 0:
            lvl = _popcount(sub) - 1
            members[fill[lvl]] = sub
            fill[lvl] += 1

    ranks = [0] * m
    cdef cnp.ndarray[cnp.int64_t, ndim=2] mat
    cdef uint64_t face
    cdef int res
    for p in range(m - 1):
        if counts[p] == 0 or counts[p + 1] == 0:
            continue
        mat = np.zeros((counts[p + 1], counts[p]), dtype=np.int64)
        for row in range(counts[p + 1]):
            sub = members[starts[p + 1] + row]
            k = 0
            for bit in range(m):
                if (sub >> bit) & 1:
                    face = sub & ~(<uint64_t>1 << bit)
                    if pos[face] >= 0:
                        mat[row, pos[face]] = -1 if (k & 1) else 1
                    k += 1
        res = _rank_inplace(mat)
        if res < 0:
            return None
        ranks[p] = res
    dims = []
    for p in range(m):
        dims.append(int(counts[p]) - ranks[p] - (ranks[p - 1] if p else 0))
    while dims and dims[-1] == 0:
        dims.pop()
    return tuple(dims)
