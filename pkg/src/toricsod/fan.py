"""Combinatorics of U_Sigma: simplicial complexes, quotient data and fans.

Indices are 0-based internally; the JSON schema and the string forms use
1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .linalg import solve_exact, smith_invariants


class FanError(ValueError):
    pass


class AmbiguousCone(FanError):
    """A vector sits in the relative interior of two different cones."""


class NotCovered(FanError):
    """No cone of the fan contains the vector."""


@dataclass(frozen=True)
class SimplicialComplex:
    """Complex on ``range(n)`` stored by its maximal faces.

    ``max_faces`` are sorted tuples; the empty complex (no faces at all) is
    not representable, use :data:`EMPTY` for an empty stratum.
    """

    n: int
    max_faces: tuple[tuple[int, ...], ...]

    @classmethod
    def from_faces(cls, n, faces):
        faces = {tuple(sorted(set(f))) for f in faces}
        maximal = [f for f in faces if not any(set(f) < set(g) for g in faces)]
        return cls(n, tuple(sorted(maximal, key=lambda f: (len(f), f))))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << i for i in f) for f in self.max_faces)

    def is_face(self, subset) -> bool:
        m = sum(1 << i for i in subset)
        return any(m & f == m for f in self.masks)

    def faces(self):
        """All faces, smallest first."""
        seen = set()
        for f in self.max_faces:
            for k in range(len(f) + 1):
                for sub in combinations(f, k):
                    seen.add(sub)
        return sorted(seen, key=lambda s: (len(s), s))

    def used_coordinates(self) -> frozenset[int]:
        return frozenset(i for f in self.max_faces for i in f)

    def to_json(self):
        return {"n": self.n, "max_faces": [[i + 1 for i in f] for f in self.max_faces]}

    @classmethod
    def from_json(cls, data):
        return cls(
            int(data["n"]),
            tuple(tuple(sorted(i - 1 for i in f)) for f in data["max_faces"]),
        )

    def __str__(self):
        body = ",".join("{" + ",".join(str(i + 1) for i in f) + "}" for f in self.max_faces)
        return f"Complex(n={self.n}; {body})"


class _Empty:
    """The empty stratum: no face of the ambient complex contains K."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "EMPTY"

    def __bool__(self):
        return False


EMPTY = _Empty()


def validate(complex_: SimplicialComplex) -> str | None:
    """Return None if well formed, else a description of the violation."""
    if not complex_.max_faces:
        return "complex has no faces"
    for f in complex_.max_faces:
        if any(i < 0 or i >= complex_.n for i in f):
            return f"face {_fmt(f)} has an index outside 1..{complex_.n}"
        if len(set(f)) != len(f):
            return f"face {_fmt(f)} repeats an index"
    for f, g in combinations(complex_.max_faces, 2):
        if set(f) <= set(g):
            return f"{_fmt(f)} is contained in {_fmt(g)}"
        if set(g) <= set(f):
            return f"{_fmt(g)} is contained in {_fmt(f)}"
    return None


def _fmt(face):
    return "{" + ",".join(str(i + 1) for i in face) + "}"


def join(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Join on the disjoint union of ground sets, ``b`` shifted after ``a``."""
    faces = tuple(
        sorted(
            (tuple(f) + tuple(i + a.n for i in g) for f in a.max_faces for g in b.max_faces),
            key=lambda f: (len(f), f),
        )
    )
    return SimplicialComplex(a.n + b.n, faces)


def stratum_complex(complex_: SimplicialComplex, k):
    """Complex of ``{z_i = 0, i in k}`` inside U_Sigma, on the complement of k.

    Ground elements of the result are renumbered in increasing order of the
    surviving indices.  Returns :data:`EMPTY` if no face contains ``k``.
    """
    k = set(k)
    rest = [i for i in range(complex_.n) if i not in k]
    pos = {i: j for j, i in enumerate(rest)}
    faces = [f for f in complex_.max_faces if k <= set(f)]
    if not faces:
        return EMPTY
    return SimplicialComplex.from_faces(
        len(rest), [[pos[i] for i in f if i not in k] for f in faces]
    )


@dataclass(frozen=True)
class StackyPresentation:
    """U_Sigma together with the weights of the quotient group G."""

    complex: SimplicialComplex
    weights: tuple[tuple[int, ...], ...] = ()
    torsion: tuple[tuple[tuple[int, ...], int], ...] = ()

    def __post_init__(self):
        for row in self.weights:
            if len(row) != self.complex.n:
                raise FanError(f"weight row {row} has length {len(row)}, expected {self.complex.n}")
        for row, mod in self.torsion:
            if len(row) != self.complex.n:
                raise FanError(f"torsion row {row} has length {len(row)}, expected {self.complex.n}")
            if mod < 2:
                raise FanError(f"torsion modulus {mod} must be >= 2")

    def is_injective(self) -> bool:
        """True iff G -> (C*)^n is injective.

        Equivalently the character map Z^n -> Z^r + sum Z/m_j is onto, i.e.
        every invariant factor of [W 0; T diag(m)] equals 1.
        """
        r, t, n = len(self.weights), len(self.torsion), self.complex.n
        if r + t == 0:
            return True
        rows = [list(w) + [0] * t for w in self.weights]
        for j, (row, mod) in enumerate(self.torsion):
            extra = [0] * t
            extra[j] = mod
            rows.append(list(row) + extra)
        inv = smith_invariants(rows)
        return len(inv) == r + t and all(abs(d) == 1 for d in inv)

    def to_json(self):
        out = self.complex.to_json()
        if self.weights:
            out["weights"] = [list(w) for w in self.weights]
        if self.torsion:
            out["torsion"] = [{"row": list(r), "mod": m} for r, m in self.torsion]
        return out

    @classmethod
    def from_json(cls, data):
        cx = SimplicialComplex.from_json(data)
        weights = tuple(tuple(int(x) for x in w) for w in data.get("weights", []))
        torsion = tuple(
            (tuple(int(x) for x in t["row"]), int(t["mod"])) for t in data.get("torsion", [])
        )
        return cls(cx, weights, torsion)


@dataclass(frozen=True)
class StackyFan:
    """Rays in Z^d plus the cone complex; simplicial by assumption."""

    rays: tuple[tuple[int, ...], ...]
    complex: SimplicialComplex
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.rays[0]) if self.rays else 0

    def check(self) -> str | None:
        bad = validate(self.complex)
        if bad:
            return bad
        if len(self.rays) != self.complex.n:
            return f"{len(self.rays)} rays for {self.complex.n} ground elements"
        for i, v in enumerate(self.rays):
            if not any(v):
                return f"ray {i + 1} is zero"
        from .linalg import rank_exact

        for f in self.complex.max_faces:
            if rank_exact([self.rays[i] for i in f]) != len(f):
                return f"rays of {_fmt(f)} are linearly dependent"
        return None

    def cone_containing(self, v):
        """Minimal face whose cone contains ``v``, with its certificate.

        Returns ``(face, coefficients)`` where ``v = sum coeff * ray`` and all
        coefficients are positive Fractions.  The certificate is re-checked
        before returning.
        """
        v = tuple(Fraction(x) for x in v)
        if not any(v):
            return (), ()
        hits = []
        for face in self.complex.faces():
            if not face:
                continue
            cols = [self.rays[i] for i in face]
            lam = solve_exact([[c[r] for c in cols] for r in range(len(v))], list(v))
            if lam is None or any(x <= 0 for x in lam):
                continue
            hits.append((face, tuple(lam)))
        if not hits:
            raise NotCovered(f"{tuple(str(x) for x in v)} lies in no cone")
        if len(hits) > 1:
            raise AmbiguousCone(
                f"{tuple(str(x) for x in v)} is interior to {_fmt(hits[0][0])} and {_fmt(hits[1][0])}"
            )
        face, lam = hits[0]
        check = [sum(lam[j] * self.rays[i][r] for j, i in enumerate(face)) for r in range(len(v))]
        assert tuple(check) == v, "cone certificate failed"
        return face, lam
