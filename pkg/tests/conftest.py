from __future__ import annotations

import pytest

from toricsod import cache
from toricsod.fan import SimplicialComplex
from toricsod.space import Space, product, projective_space, weighted_p12


@pytest.fixture(autouse=True)
def fresh_cache():
    """Each test starts from an empty in-memory table cache."""
    old = cache.active()
    cache.use(cache.TableCache())
    yield
    cache.use(old)


@pytest.fixture
def p1():
    return projective_space(1)


@pytest.fixture
def p2():
    return projective_space(2)


@pytest.fixture
def p12():
    return weighted_p12()


@pytest.fixture
def p1xp1(p1):
    return product("P1xP1", p1, p1)


def cx(n, faces):
    return SimplicialComplex.from_faces(n, faces)
