"""The built-in test spaces.

Every closed space here is small enough for exact linear algebra in well
under a second.  Singular vertices always carry the smallest ids.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Dict, List

from .complex import (StratifiedComplex, barycentric_subdivide, boundary_of_simplex, cone,
                      disjoint_union, product, suspension)
from .perversity import GM_NAMES, Perversity, gm_perversity, random_perversity


def circle(k: int = 3, name=None) -> StratifiedComplex:
    return StratifiedComplex.from_data(name or "S1_%d" % k, [(i, (i + 1) % k) for i in range(k)])


def point(name="pt") -> StratifiedComplex:
    return StratifiedComplex.from_data(name, [(0,)])


def two_points(name="S0") -> StratifiedComplex:
    return StratifiedComplex.from_data(name, [(0,), (1,)])


def octahedron() -> StratifiedComplex:
    square = circle(4, "square")
    S = suspension(square)
    return StratifiedComplex.from_data("octahedron", S.top_simplices())


def torus7() -> StratifiedComplex:
    """The 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return StratifiedComplex.from_data("T2", tris)


def rp2() -> StratifiedComplex:
    """The 6-vertex real projective plane."""
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
            (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    return StratifiedComplex.from_data("RP2", tris)


def staircase_torus() -> StratifiedComplex:
    return product(circle(3), circle(3), name="S1xS1")


def suspended_torus() -> StratifiedComplex:
    return suspension(torus7(), name="ST2")


def suspended_two_circles() -> StratifiedComplex:
    return suspension(disjoint_union(circle(3), circle(3)), name="S(S1+S1)")


def sphere3() -> StratifiedComplex:
    return boundary_of_simplex(3, "S3")


@lru_cache(maxsize=None)
def closed_spaces() -> Dict[str, StratifiedComplex]:
    """Closed corpus spaces keyed by name, in a fixed order."""
    spaces = [
        boundary_of_simplex(1, "S1"),
        boundary_of_simplex(2, "S2"),
        octahedron(),
        torus7(),
        staircase_torus(),
        rp2(),
        sphere3(),
        suspended_torus(),
        suspended_two_circles(),
    ]
    return {X.name: X for X in spaces}


#: spaces whose orientation exists only in characteristic two
F2_ONLY = {"RP2"}

#: spaces where the augmentation on degree zero is not an isomorphism
NON_NORMAL = {"S(S1+S1)"}

MANIFOLDS = ("S1", "S2", "octahedron", "T2", "S1xS1", "S3")


@lru_cache(maxsize=None)
def cone_links() -> Dict[str, StratifiedComplex]:
    links = [boundary_of_simplex(1, "S1"), torus7(), two_points("S0")]
    return {L.name: L for L in links}


def cones() -> Dict[str, StratifiedComplex]:
    return {"c(%s)" % k: cone(L) for k, L in cone_links().items()}


def get_space(name: str) -> StratifiedComplex:
    spaces = dict(closed_spaces())
    spaces.update(cones())
    if name in spaces:
        return spaces[name]
    if name.startswith("sd(") and name.endswith(")"):
        return barycentric_subdivide(get_space(name[3:-1]))
    raise KeyError("unknown corpus space %r" % name)


def perversity_grid(X: StratifiedComplex, seed: int = 0, randoms: int = 2) -> List[Perversity]:
    """GM perversities, their duals, and seeded random general perversities.

    Duplicate tables are dropped, keeping the first name.
    """
    grid: List[Perversity] = []
    for name in GM_NAMES:
        p = gm_perversity(name, X)
        grid += [p, p.dual()]
    rng = random.Random("%s:%d" % (X.name, seed))
    for k in range(randoms):
        p = random_perversity(X, rng, name="rand%d" % k)
        grid += [p, p.dual()]
    out: List[Perversity] = []
    seen = set()
    for p in grid:
        key = tuple(sorted(p.values.items()))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out
