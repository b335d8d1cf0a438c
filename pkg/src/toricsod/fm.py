"""K-theoretic shadows of the wall-crossing equivalence FM = (pi_+)_* (pi_-)^*.

Classes are integer combinations of equivariant line bundles.  Pushforward
is never computed geometrically: ``fm_class`` solves the adjunction
``<A, FM x>_+ = <pi_+^* A, pi_-^* x>_tilde`` on a window of probe line
bundles and validates the solution on held-out probes.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .bundle import BundleSpec, TotalSpace, build, canonical_base
from .cech import TwistedStratumSheaf, WeightSelector, graded_cohomology, pattern_table
from .fan import SimplicialComplex, StackyFan, StackyPresentation
from .linalg import solve_integer
from .objects import ExceptionalObject, chi
from .space import Space


class NonIntegralPullback(ArithmeticError):
    def __init__(self, side, weight, coord, value):
        self.side, self.weight, self.coord, self.value = side, tuple(weight), coord, value
        super().__init__(f"pullback of {self.weight} from the {side} side has value {value} on coordinate {coord + 1}")


class WindowExhausted(RuntimeError):
    pass


class NonIntegralSolution(ArithmeticError):
    def __init__(self, msg, residuals=None):
        self.residuals = residuals or {}
        super().__init__(msg)


class KClass:
    """Finite formal sum of [O(d)], equal weights merged, zeros dropped."""

    __slots__ = ("_c",)

    def __init__(self, terms=None):
        c = Counter()
        for d, k in dict(terms or {}).items() if not isinstance(terms, list) else terms:
            c[tuple(int(x) for x in d)] += int(k)
        self._c = {d: k for d, k in sorted(c.items()) if k}

    @classmethod
    def line(cls, d):
        return cls({tuple(d): 1})

    def items(self):
        return self._c.items()

    def __add__(self, other):
        return KClass(list(self._c.items()) + list(other.items()))

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, k):
        return KClass({d: k * v for d, v in self._c.items()})

    def twisted(self, e):
        """Product with [O(e)]."""
        return KClass({tuple(a + b for a, b in zip(d, e)): v for d, v in self._c.items()})

    def map(self, f):
        return KClass([(f(d), v) for d, v in self._c.items()])

    def __eq__(self, other):
        return isinstance(other, KClass) and self._c == other._c

    def __hash__(self):
        return hash(tuple(self._c.items()))

    def __bool__(self):
        return bool(self._c)

    def to_json(self):
        return [{"d": list(d), "c": k} for d, k in self._c.items()]

    @classmethod
    def from_json(cls, data):
        return cls([(tuple(t["d"]), t["c"]) for t in data])

    def __repr__(self):
        if not self._c:
            return "0"
        return " + ".join(f"{k}[O{d}]" for d, k in self._c.items())


def class_of(E: ExceptionalObject) -> KClass:
    """Alternating sum of the Koszul terms of O_{I,p}."""
    n = E.n
    out = []
    for mask in range(1 << len(E.I)):
        S = [i for k, i in enumerate(E.I) if mask >> k & 1]
        out.append((tuple(-a - b for a, b in zip(E.p, chi(S, n))), (-1) ** (len(S) + E.shift)))
    return KClass(out)


@lru_cache(maxsize=256)
def _is_equivariant(sel: WeightSelector) -> bool:
    return sel == WeightSelector.equivariant(sel.size)


@lru_cache(maxsize=1 << 20)
def _chi_eq(cx: SimplicialComplex, m: tuple) -> int:
    neg = sum(1 << i for i, x in enumerate(m) if x < 0)
    return sum((-1) ** k * d for k, d in enumerate(pattern_table(cx, 0, neg)))


@lru_cache(maxsize=1 << 16)
def _chi_base(base: Space, m: tuple) -> int:
    return graded_cohomology(TwistedStratumSheaf(base.complex, (), m), base.selector).euler()


def chi_line(space, m, sel=None) -> int:
    """Euler characteristic of the selected part of O(m)."""
    sel = sel or space.selector
    if _is_equivariant(sel):
        return _chi_eq(space.complex, tuple(m))
    if isinstance(space, TotalSpace) and sel == space.selector:
        # fiber rows pin d_F = 0, which also kills the C-term: Kunneth applies
        nb = space.n_base
        return _chi_base(space.base_space(), tuple(m[:nb])) * _chi_eq(space.spec.fiber, tuple(m[nb:]))
    return graded_cohomology(TwistedStratumSheaf(space.complex, (), tuple(m)), sel).euler()


def euler_pairing(space, x: KClass, y: KClass, sel=None) -> int:
    """Bilinear extension of <O(a), O(b)> = chi(O(b - a))."""
    total = 0
    for a, ca in x.items():
        for b, cb in y.items():
            total += ca * cb * chi_line(space, tuple(q - p for p, q in zip(a, b)), sel)
    return total


# ---- scenarios ------------------------------------------------------------


@dataclass(frozen=True)
class WallCrossingScenario:
    """Two chambers on N shared coordinates and a common refinement.

    ``fan_tilde`` has the N shared rays first, then the extra rays.  With
    ``bundle`` set (a base presentation and its twist rows on the N shared
    coordinates) every space becomes the total space of the split bundle
    with that fiber; extra coordinates get zero twist columns.
    """

    N: int
    rays: tuple[tuple[int, ...], ...]
    complex_minus: SimplicialComplex
    complex_plus: SimplicialComplex
    extra_rays: tuple[tuple[int, ...], ...]
    complex_tilde: SimplicialComplex
    canonical: tuple[int, ...] = None
    base: StackyPresentation = None
    twist: tuple[tuple[int, ...], ...] = ()
    name: str = "scenario"

    def __post_init__(self):
        if self.canonical is None:
            object.__setattr__(self, "canonical", (1,) * (self.N + len(self.extra_rays)))
        if len(self.rays) != self.N:
            raise ValueError(f"{len(self.rays)} shared rays for N={self.N}")
        for cx, n in ((self.complex_minus, self.N), (self.complex_plus, self.N), (self.complex_tilde, self.e + self.N)):
            if cx.n != n:
                raise ValueError(f"complex on {cx.n} coordinates, expected {n}")

    @property
    def e(self) -> int:
        return len(self.extra_rays)

    @property
    def nb(self) -> int:
        return self.base.complex.n if self.base is not None else 0

    def fan(self, side) -> StackyFan:
        if side == "minus":
            return StackyFan(self.rays, self.complex_minus)
        if side == "plus":
            return StackyFan(self.rays, self.complex_plus)
        return StackyFan(self.rays + self.extra_rays, self.complex_tilde)

    def space(self, side) -> Space:
        return _side_space(self, side)

    def _build_space(self, side) -> Space:
        cx = {"minus": self.complex_minus, "plus": self.complex_plus, "tilde": self.complex_tilde}[side]
        label = f"{self.name}:{side}"
        if self.base is None:
            return Space.equivariant(label, cx)
        twist = tuple(tuple(r) + (0,) * (cx.n - len(r)) for r in self.twist)
        return build(BundleSpec(self.base, cx, twist, label))

    def check(self) -> str | None:
        """Refinement: every tilde cone sits inside a cone of each side."""
        for side in ("minus", "plus", "tilde"):
            bad = self.fan(side).check()
            if bad:
                return f"{side}: {bad}"
        tilde = self.fan("tilde")
        for side in ("minus", "plus"):
            f = self.fan(side)
            for face in self.complex_tilde.max_faces:
                rays = [tilde.rays[i] for i in face]
                if not rays:
                    continue
                centre = [sum(v[k] for v in rays) for k in range(tilde.dim)]
                big, _ = f.cone_containing(centre)
                for v in rays:
                    sub, _ = f.cone_containing(v)
                    if not set(sub) <= set(big):
                        return f"tilde cone {face} is not inside a {side} cone"
        return None

    def to_json(self):
        out = {
            "name": self.name,
            "N": self.N,
            "rays_shared": [list(v) for v in self.rays],
            "complex_minus": self.complex_minus.to_json(),
            "complex_plus": self.complex_plus.to_json(),
            "extra_rays": [list(v) for v in self.extra_rays],
            "complex_tilde": self.complex_tilde.to_json(),
            "canonical": list(self.canonical),
        }
        if self.base is not None:
            out["bundle"] = {"base": self.base.to_json(), "twist": [list(r) for r in self.twist]}
        return out

    @classmethod
    def from_json(cls, data):
        N = int(data["N"])
        extra = tuple(tuple(v) for v in data.get("extra_rays", []))
        tilde = data.get("complex_tilde", data["complex_plus"])
        base = twist = None
        if data.get("bundle"):
            base = StackyPresentation.from_json(data["bundle"]["base"])
            twist = tuple(tuple(r) for r in data["bundle"]["twist"])
        return cls(
            N,
            tuple(tuple(v) for v in data["rays_shared"]),
            SimplicialComplex.from_json(data["complex_minus"]),
            SimplicialComplex.from_json(data["complex_plus"]),
            extra,
            SimplicialComplex.from_json(tilde),
            tuple(data["canonical"]) if "canonical" in data else None,
            base,
            twist or (),
            data.get("name", "scenario"),
        )


@lru_cache(maxsize=64)
def _side_space(sc, side):
    return sc._build_space(side)


@lru_cache(maxsize=1 << 16)
def pullback(sc: WallCrossingScenario, side, d):
    """Weight on the refined space: used coordinates kept, the rest by support function.

    Vectors carry the base block first when the scenario is a bundle.
    """
    nb = sc.nb
    base, fib = tuple(d[:nb]), tuple(d[nb:])
    if len(fib) != sc.N:
        raise ValueError(f"weight has {len(fib)} fiber coordinates, expected {sc.N}")
    fan = sc.fan(side)
    tilde = sc.fan("tilde")
    used = fan.complex.used_coordinates()
    out = []
    for j in range(sc.N + sc.e):
        if j < sc.N and j in used:
            out.append(fib[j])
            continue
        face, lam = fan.cone_containing(tilde.rays[j])
        val = sum(l * fib[i] for l, i in zip(lam, face))
        if Fraction(val).denominator != 1:
            raise NonIntegralPullback(side, d, j, val)
        out.append(int(val))
    return base + tuple(out)


def pullback_class(sc, side, x: KClass) -> KClass:
    return x.map(lambda d: pullback(sc, side, d))


def canonical_weight(sc: WallCrossingScenario, side) -> tuple[int, ...]:
    """K = -sum c_i D_i over the coordinates the side actually uses."""
    used = sc.fan(side).complex.used_coordinates()
    return (0,) * sc.nb + tuple(-sc.canonical[j] if j in used else 0 for j in range(sc.N))


@dataclass
class CrepancyVerdict:
    ok: bool
    minus: tuple
    plus: tuple
    witness: dict | None = None

    def to_json(self):
        return {"ok": self.ok, "minus": list(self.minus), "plus": list(self.plus), "witness": self.witness}


def check_crepant(sc: WallCrossingScenario) -> CrepancyVerdict:
    km = pullback(sc, "minus", canonical_weight(sc, "minus"))
    kp = pullback(sc, "plus", canonical_weight(sc, "plus"))
    for j, (a, b) in enumerate(zip(km, kp)):
        if a != b:
            return CrepancyVerdict(False, km, kp, {"coordinate": j + 1, "minus": a, "plus": b, "discrepancy": b - a})
    return CrepancyVerdict(True, km, kp)


def _canon_plus(sc, d):
    """Plus-side representative: unused fiber coordinates zero, base canonical."""
    nb = sc.nb
    used = sc.complex_plus.used_coordinates()
    fib = tuple(x if j in used else 0 for j, x in enumerate(d[nb:]))
    if nb:
        total = sc.space("plus")
        return canonical_base(total, d[:nb]) + fib
    return fib


def _box(sc, centres, r):
    """Canonical plus weights within radius r of any centre."""
    nb = sc.nb
    used = sorted(sc.complex_plus.used_coordinates())
    base_axes = [0] if nb else []
    out = set()
    for c in centres:
        axes = [nb + j for j in used] + base_axes
        for delta in product(range(-r, r + 1), repeat=len(axes)):
            d = list(c)
            for a, v in zip(axes, delta):
                d[a] += v
            out.add(_canon_plus(sc, tuple(d)))

    def dist(d):
        return min(sum(abs(a - b) for a, b in zip(d, c)) for c in centres)

    # nearest weights first, so the pivot solution favours them
    return sorted(out, key=lambda d: (dist(d), d))


_GRAMS: dict = {}


def _gram(space, weights):
    """Matrix chi(O(d - a)); it only depends on the weights up to translation."""
    c0 = weights[0]
    key = (space, tuple(tuple(x - y for x, y in zip(d, c0)) for d in weights))
    if key not in _GRAMS:
        _GRAMS[key] = [[chi_line(space, tuple(q - p for p, q in zip(a, d))) for d in weights] for a in weights]
    return _GRAMS[key]


def _holdout(sc, centres, r, k, rng):
    """k seeded random canonical weights within radius r of the centres."""
    nb = sc.nb
    axes = [nb + j for j in sorted(sc.complex_plus.used_coordinates())] + ([0] if nb else [])
    out = []
    for _ in range(k):
        d = list(rng.choice(centres))
        for a in axes:
            d[a] += rng.randint(-r, r)
        out.append(_canon_plus(sc, tuple(d)))
    return out


def fm_class(sc: WallCrossingScenario, x: KClass, radius=1, cap=6, holdout=48, seed=0) -> KClass:
    """Plus-side class with the adjunction pairings of pi_-^* x, validated off-sample."""
    px = pullback_class(sc, "minus", x)
    if not px:
        return KClass()
    plus, tilde = sc.space("plus"), sc.space("tilde")
    nb = sc.nb
    centres = sorted({_canon_plus(sc, d[: nb + sc.N]) for d, _ in px.items()})

    def rhs(a):
        return euler_pairing(tilde, KClass.line(pullback(sc, "plus", a)), px)

    rng = random.Random(seed)
    r = radius
    last = None
    while True:
        unknowns = _box(sc, centres, r)
        probes = unknowns
        mat = _gram(plus, unknowns)
        sol = solve_integer(mat, [rhs(a) for a in probes])
        if sol is not None and all(v.denominator == 1 for v in sol):
            cand = KClass({d: int(v) for d, v in zip(unknowns, sol)})
            extra = _holdout(sc, centres, r + 2, holdout, rng)
            res = {}
            for a in extra:
                got = euler_pairing(plus, KClass.line(a), cand)
                want = rhs(a)
                if got != want:
                    res[str(a)] = want - got
            if not res:
                return cand
            last = NonIntegralSolution(f"held-out probes disagree at radius {r}", res)
        elif sol is not None:
            last = NonIntegralSolution(f"rational solution at radius {r}", {"denominators": sorted({v.denominator for v in sol})})
        if r >= cap:
            if last is not None:
                raise last
            raise WindowExhausted(f"no solution up to radius {cap}")
        r = min(cap, 2 * r)


@dataclass
class PairingReport:
    checked: int = 0
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def to_json(self):
        return {"checked": self.checked, "failures": self.failures, "skipped": self.skipped, "ok": self.ok}


def twist_window(sc: WallCrossingScenario, lo=-2, hi=2, base_lo=0, base_hi=0):
    """Minus-side line bundles with entries in [lo, hi] on the used coordinates.

    On a bundle scenario the first base coordinate ranges over [base_lo, base_hi].
    """
    used = sorted(sc.complex_minus.used_coordinates())
    bases = [(b,) + (0,) * (sc.nb - 1) for b in range(base_lo, base_hi + 1)] if sc.nb else [()]
    out = []
    for b in bases:
        for vals in product(range(lo, hi + 1), repeat=len(used)):
            d = [0] * sc.N
            for j, v in zip(used, vals):
                d[j] = v
            out.append(b + tuple(d))
    return out


def pulls_back(sc, d) -> bool:
    try:
        pullback(sc, "minus", tuple(d))
    except NonIntegralPullback:
        return False
    return True


def sample_pairs(sc: WallCrossingScenario, count, window, seed=0):
    """Seeded pairs of line bundles from ``window`` whose pullbacks are integral."""
    pool = [d for d in window if pulls_back(sc, d)]
    rng = random.Random(seed)
    return [(KClass.line(rng.choice(pool)), KClass.line(rng.choice(pool))) for _ in range(count)]


def check_pairing_preservation(sc: WallCrossingScenario, pairs) -> PairingReport:
    """<FM x, FM y>_+ = <x, y>_- on every pair; classes without integral pullback are skipped."""
    rep = PairingReport()
    minus, plus = sc.space("minus"), sc.space("plus")
    memo = {}

    def fm(x):
        if x not in memo:
            memo[x] = fm_class(sc, x)
        return memo[x]

    for x, y in pairs:
        try:
            fx, fy = fm(x), fm(y)
        except NonIntegralPullback as exc:
            rep.skipped.append({"x": x.to_json(), "y": y.to_json(), "reason": str(exc)})
            continue
        lhs = euler_pairing(plus, fx, fy)
        rhs = euler_pairing(minus, x, y)
        rep.checked += 1
        if lhs != rhs:
            rep.failures.append({"x": x.to_json(), "y": y.to_json(), "plus": lhs, "minus": rhs})
    return rep


def base_twist_compatibility(sc: WallCrossingScenario, x: KClass, m=None) -> dict:
    """Compare FM(phi_-^* M . x) with phi_+^* M . FM(x) for a base line bundle M."""
    nb = sc.nb
    if not nb:
        raise ValueError("scenario has no base")
    m = tuple(m) if m is not None else (1,) + (0,) * (nb - 1)
    shift = m + (0,) * sc.N
    lhs = fm_class(sc, x.twisted(shift))
    rhs = fm_class(sc, x).twisted(shift).map(lambda d: _canon_plus(sc, d))
    lhs = lhs.map(lambda d: _canon_plus(sc, d))
    return {"ok": lhs == rhs, "lhs": lhs.to_json(), "rhs": rhs.to_json(), "M": list(m)}


def p112_f2(bundle=False) -> WallCrossingScenario:
    """P(1,1,2) and F_2 from the weight columns (1,0),(1,0),(-2,1),(0,1); pi_+ = identity."""
    rays = ((1, 0), (-1, 2), (0, 1), (0, -1))
    minus = SimplicialComplex.from_faces(4, [(0, 1), (1, 3), (0, 3)])
    plus = SimplicialComplex.from_faces(4, [(0, 2), (1, 2), (1, 3), (0, 3)])
    base = twist = None
    if bundle:
        base = StackyPresentation(SimplicialComplex.from_faces(2, [(0,), (1,)]), ((1, 1),))
        twist = ((0, 0, 0, -1),)
    return WallCrossingScenario(4, rays, minus, plus, (), plus, None, base, twist or (),
                                "P(1,1,2)/F2" + (" over P1" if bundle else ""))


def blowup_control() -> WallCrossingScenario:
    """Blowup of P^2 at a torus-fixed point: not crepant, discrepancy 1 on the new ray."""
    rays = ((1, 0), (0, 1), (-1, -1), (1, 1))
    minus = SimplicialComplex.from_faces(4, [(0, 1), (1, 2), (0, 2)])
    plus = SimplicialComplex.from_faces(4, [(0, 3), (1, 3), (1, 2), (0, 2)])
    return WallCrossingScenario(4, rays, minus, plus, (), plus, None, None, (), "Bl_pt P2")
