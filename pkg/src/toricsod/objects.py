"""Stratum objects O_{I,p}, their integer labels, orders and Koszul resolutions.

``O_{I,p}`` is the sheaf of ``S / <z_i : i in I>`` with its generator in
degree ``p``, i.e. the module ``(S/<z_I>)(-p)`` in the twist convention of
:mod:`toricsod.cech`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class ExceptionalObject:
    I: tuple[int, ...]
    p: tuple[int, ...]
    shift: int = 0

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(sorted(set(self.I))))
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if any(i < 0 or i >= len(self.p) for i in self.I):
            raise ValueError(f"support {self.I} out of range for n={len(self.p)}")

    @property
    def n(self) -> int:
        return len(self.p)

    def twisted(self, e):
        """``self`` tensored with O(e): generator degree moves to ``p - e``."""
        return ExceptionalObject(self.I, tuple(a - b for a, b in zip(self.p, e)), self.shift)

    def to_json(self):
        out = {"I": [i + 1 for i in self.I], "p": list(self.p)}
        if self.shift:
            out["shift"] = self.shift
        return out

    @classmethod
    def from_json(cls, data):
        if "a" in data:
            obj = decode(tuple(data["a"]))
            return cls(obj.I, obj.p, int(data.get("shift", 0)))
        return cls(tuple(i - 1 for i in data["I"]), tuple(data["p"]), int(data.get("shift", 0)))

    def __str__(self):
        body = "O_{" + "{" + ",".join(str(i + 1) for i in self.I) + "}," + str(self.p) + "}"
        return body + (f"[{self.shift}]" if self.shift else "")


def decode(a) -> ExceptionalObject:
    """Canonical pair of a label: I = {a_i >= 1}, p = a - chi_I."""
    a = tuple(int(x) for x in a)
    I = tuple(i for i, x in enumerate(a) if x >= 1)
    return ExceptionalObject(I, tuple(x - 1 if x >= 1 else x for x in a))


def encode(I, p) -> tuple[int, ...]:
    I = set(I)
    return tuple(x + 1 if (x >= 0 and i in I) else x for i, x in enumerate(p))


class Order(enum.Enum):
    GREATER = "Greater"
    LESS = "Less"
    EQUAL = "Equal"
    TIE = "Tie"


def compare_pairs(A: ExceptionalObject, B: ExceptionalObject) -> Order:
    """Lexicographic on p, then by |I|; same p and |I| with I != J is a Tie."""
    if A.n != B.n:
        raise ValueError("objects live on different ambient sizes")
    if A.p != B.p:
        return Order.GREATER if A.p > B.p else Order.LESS
    if len(A.I) != len(B.I):
        return Order.GREATER if len(A.I) > len(B.I) else Order.LESS
    return Order.EQUAL if A.I == B.I else Order.TIE


def chi(S, n) -> tuple[int, ...]:
    S = set(S)
    return tuple(int(i in S) for i in range(n))


@dataclass(frozen=True)
class KoszulTerm:
    S: tuple[int, ...]
    twist: tuple[int, ...]  # the term is O(twist)


def koszul_sign(i, S) -> int:
    """Sign of the z_i component of the Koszul differential out of e_S."""
    return -1 if sorted(S).index(i) % 2 else 1


def koszul(I, p):
    """Koszul resolution of O_{I,p}: term s lists O(-p - chi_S), |S| = s.

    The differential sends e_S to ``sum koszul_sign(i, S) * z_i * e_{S - i}``.
    """
    I = tuple(sorted(I))
    n = len(p)
    terms = []
    for s in range(len(I) + 1):
        terms.append(
            [
                KoszulTerm(S, tuple(-a - b for a, b in zip(p, chi(S, n))))
                for S in combinations(I, s)
            ]
        )
    return terms
