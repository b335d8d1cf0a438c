"""Kernel dispatch: compiled core when importable, pure Python otherwise.

Set ``TORICSOD_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_ck = None
if not os.environ.get("TORICSOD_PURE"):
    try:
        from . import _ckernels as _ck  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _ck = None


def rank(rows, ncols: int) -> int:
    if not rows or ncols == 0:
        return 0
    if _ck is not None:
        res = _ck.rank(rows, ncols)
        if res is not None:
            return res
    return _pykernels.rank(rows, ncols)


def cech_pattern(face_masks, k_mask: int, n_mask: int) -> tuple[int, ...]:
    if _ck is not None:
        res = _ck.cech_pattern(list(face_masks), k_mask, n_mask)
        if res is not None:
            return res
    return _pykernels.cech_pattern(face_masks, k_mask, n_mask)
