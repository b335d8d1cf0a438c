"""A quotient stack [U_Sigma / G] as the engines see it: a complex plus a degree selector."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .cech import WeightSelector
from .fan import SimplicialComplex, StackyPresentation, join


@dataclass(frozen=True)
class Space:
    name: str
    complex: SimplicialComplex
    selector: WeightSelector

    @property
    def n(self) -> int:
        return self.complex.n

    @classmethod
    def equivariant(cls, name, complex_):
        """Fully torus-equivariant category of U_Sigma."""
        return cls(name, complex_, WeightSelector.equivariant(complex_.n))

    @classmethod
    def from_presentation(cls, name, pres: StackyPresentation):
        """Non-equivariant sheaves on [U_Sigma/G]: only G-invariant degrees."""
        n = pres.complex.n
        rows = tuple(tuple(int(x) for x in r) for r in pres.weights)
        mods = tuple((tuple(r), m, 0) for r, m in pres.torsion)
        return cls(name, pres.complex, WeightSelector(n, rows, (0,) * len(rows), mods))

    def to_json(self):
        return {"name": self.name, "complex": self.complex.to_json(), "selector": self.selector.to_json()}

    @classmethod
    def from_json(cls, data):
        cx = SimplicialComplex.from_json(data["complex"])
        if "selector" in data:
            sel = WeightSelector.from_json(data["selector"])
        else:
            sel = WeightSelector.equivariant(cx.n)
        return cls(data.get("name", "space"), cx, sel)


def product(name, a: Space, b: Space) -> Space:
    """Product stack; selector rows act block-diagonally."""
    na, nb = a.n, b.n
    sa, sb = a.selector, b.selector
    rows = tuple(r + (0,) * nb for r in sa.free_rows) + tuple((0,) * na + r for r in sb.free_rows)
    mods = tuple((r + (0,) * nb, m, s) for r, m, s in sa.mod_rows) + tuple(
        ((0,) * na + r, m, s) for r, m, s in sb.mod_rows
    )
    sel = WeightSelector(na + nb, rows, sa.target + sb.target, mods)
    return Space(name, join(a.complex, b.complex), sel)


def _cx(n, faces):
    return SimplicialComplex.from_faces(n, faces)


def projective_space(k) -> Space:
    """Equivariant P^k: every k-subset of the k+1 coordinates is a maximal face."""
    from itertools import combinations

    return Space.equivariant(f"P{k}", _cx(k + 1, combinations(range(k + 1), k)))


def weighted_p12() -> Space:
    """P(1,2) = [C^2 - 0 / C*] with weights (1,2), plus a mu_2 acting on z_1.

    The free row selects G-invariant degrees; the modular row is the extra
    finite factor, so the selected set is not a single degree.
    """
    cx = _cx(2, [(0,), (1,)])
    return Space("P(1,2)", cx, WeightSelector(2, ((1, 2),), (0,), (((1, 0), 2, 0),)))


def load(name: str) -> dict:
    """Shipped example data by file stem."""
    text = resources.files("toricsod").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)
