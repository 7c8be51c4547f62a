"""Finite simplicial stratified pseudomanifolds.

A simplex is a sorted tuple of integer vertex ids.  The filtration is
recorded as a *level* per simplex: the least ``i`` with the simplex in the
skeleton ``X^i``.  Regular simplices have level ``n``.  Strata are the
connected components of ``X^i - X^{i-1}``, computed as face-connected
classes of equal-level simplices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactfield import QQ, Field, SparseMatrix, rank

Simplex = Tuple[int, ...]


def closure(simplices: Iterable[Sequence[int]]) -> set:
    """All nonempty faces of the given simplices."""
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        if s in out:
            continue
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


def facets(s: Simplex) -> List[Simplex]:
    """Codimension-one faces, ordered by the removed position."""
    return [s[:k] + s[k + 1:] for k in range(len(s))] if len(s) > 1 else []


def faces(s: Simplex) -> List[Simplex]:
    """Every nonempty face of ``s``, including ``s`` itself."""
    return [f for k in range(1, len(s) + 1) for f in combinations(s, k)]


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class Stratum:
    index: int
    level: int
    codim: int
    simplices: Tuple[Simplex, ...]

    @property
    def singular(self) -> bool:
        return self.codim > 0

    @property
    def key(self):
        return (self.level, self.simplices[0])


@dataclass
class ValidationReport:
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class StratifiedComplex:
    """An immutable filtered simplicial complex.

    Build instances with :meth:`from_data`; the raw constructor expects the
    already-closed simplex table and level map.
    """

    name: str
    dim: int
    levels: Mapping[Simplex, int]
    boundary: frozenset = frozenset()
    orientation_hint: Optional[Simplex] = None

    @classmethod
    def from_data(cls, name: str, top_simplices, skeleta: Optional[Mapping[int, Iterable]] = None,
                  dim: Optional[int] = None, boundary: Iterable = ()):
        """Close ``top_simplices`` and assign levels from skeleton generators.

        ``skeleta[i]`` generates ``X^i``; the skeleton actually used is the
        closure of those generators together with ``X^{i-1}``.  Missing
        entries count as empty.
        """
        all_simplices = closure(top_simplices)
        if dim is None:
            dim = max((len(s) - 1 for s in all_simplices), default=-1)
        levels = {s: dim for s in all_simplices}
        skeleta = {int(k): v for k, v in (skeleta or {}).items()}
        for i in sorted(skeleta, reverse=True):
            if i >= dim:
                continue
            for s in closure(skeleta[i]):
                if s not in levels:
                    raise ValueError("skeleton simplex %s is not in the complex" % (s,))
                levels[s] = min(levels[s], i)
        bd = frozenset(closure(boundary))
        missing = bd - set(levels)
        if missing:
            raise ValueError("boundary simplex %s is not in the complex" % (min(missing),))
        return cls(name=name, dim=dim, levels=levels, boundary=bd)

    # -- basic tables ------------------------------------------------------

    @cached_property
    def simplices(self) -> Dict[int, List[Simplex]]:
        out: Dict[int, List[Simplex]] = {k: [] for k in range(self.dim + 1)}
        for s in self.levels:
            out.setdefault(len(s) - 1, []).append(s)
        for k in out:
            out[k].sort()
        return out

    @cached_property
    def index(self) -> Dict[Simplex, int]:
        return {s: k for d in self.simplices for k, s in enumerate(self.simplices[d])}

    def simplices_of_dim(self, k: int) -> List[Simplex]:
        return self.simplices.get(k, [])

    @property
    def vertices(self) -> List[int]:
        return [s[0] for s in self.simplices_of_dim(0)]

    @cached_property
    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.simplices_of_dim(k)) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector))

    def level(self, s: Simplex) -> int:
        return self.levels[s]

    def in_singular(self, s: Simplex) -> bool:
        """True when ``s`` lies in ``X^{n-1}``."""
        return self.levels[s] < self.dim

    @property
    def is_trivially_stratified(self) -> bool:
        return all(v == self.dim for v in self.levels.values())

    def skeleton(self, i: int) -> List[Simplex]:
        return sorted((s for s, lv in self.levels.items() if lv <= i), key=lambda s: (len(s), s))

    @cached_property
    def cofaces(self) -> Dict[Simplex, List[Simplex]]:
        out: Dict[Simplex, List[Simplex]] = {s: [] for s in self.levels}
        for d in range(1, self.dim + 1):
            for s in self.simplices_of_dim(d):
                for f in facets(s):
                    out[f].append(s)
        return out

    # -- strata ------------------------------------------------------------

    @cached_property
    def strata(self) -> List[Stratum]:
        uf = _UnionFind(self.levels)
        for s, lv in self.levels.items():
            for f in facets(s):
                if self.levels[f] == lv:
                    uf.union(f, s)
        groups: Dict[Simplex, list] = {}
        for s in self.levels:
            groups.setdefault(uf.find(s), []).append(s)
        raw = []
        for members in groups.values():
            members.sort(key=lambda s: (len(s), s))
            lv = self.levels[members[0]]
            raw.append((lv, (len(members[0]), members[0]), tuple(members)))
        raw.sort()
        return [Stratum(k, lv, self.dim - lv, mem) for k, (lv, _, mem) in enumerate(raw)]

    @cached_property
    def stratum_of(self) -> Dict[Simplex, int]:
        return {s: st.index for st in self.strata for s in st.simplices}

    @property
    def singular_strata(self) -> List[Stratum]:
        return [st for st in self.strata if st.singular]

    @property
    def regular_strata(self) -> List[Stratum]:
        return [st for st in self.strata if not st.singular]

    # -- validation --------------------------------------------------------

    def is_flag_like(self) -> bool:
        return not self._flag_violations(limit=1)

    def _flag_violations(self, limit=None) -> List[str]:
        out = []
        lv = self.levels
        for s in self.levels:
            for i in sorted({lv[(v,)] for v in s}):
                if i >= self.dim:
                    continue
                span = tuple(v for v in s if lv[(v,)] <= i)
                if lv[span] > i:
                    out.append("simplex %s meets X^%d in more than one face" % (s, i))
                    if limit and len(out) >= limit:
                        return out
                    break
        return out

    def validate(self) -> ValidationReport:
        """Check closure, purity and the pseudomanifold conditions."""
        rep = ValidationReport()
        n = self.dim
        for s, lv in self.levels.items():
            for f in facets(s):
                if f not in self.levels:
                    rep.errors.append("face %s of %s missing" % (f, s))
                elif self.levels[f] > lv:
                    rep.errors.append("skeleton not closed: face %s of %s" % (f, s))
        tops = self.simplices_of_dim(n)
        if not tops:
            rep.errors.append("no %d-simplices" % n)
        for s in self.levels:
            if len(s) - 1 < n and not self.cofaces[s]:
                rep.errors.append("not pure: %s is maximal" % (s,))
        for s in tops:
            if self.levels[s] < n:
                rep.errors.append("top simplex %s lies in X^%d" % (s, n - 1))
        for s in self.simplices_of_dim(n - 1) if n > 0 else []:
            if self.levels[s] < n:
                continue
            k = len(self.cofaces[s])
            if s in self.boundary:
                if k != 1:
                    rep.errors.append("boundary simplex %s has %d cofaces" % (s, k))
            elif k != 2:
                rep.errors.append("pseudomanifold condition fails at %s (%d cofaces)" % (s, k))
        flags = self._flag_violations(limit=5)
        if flags:
            rep.warnings.extend(flags)
            rep.warnings.append("triangulation is not flag-like; one barycentric subdivision is recommended")
        if any(st.codim == 1 for st in self.strata):
            rep.warnings.append("codimension-one strata present")
        return rep

    # -- orientation -------------------------------------------------------

    def find_fundamental_cycle(self, field: Field = QQ) -> Optional[Dict[Simplex, object]]:
        """Signs on the top simplices making a cycle of the zeroed boundary.

        Each face-connected component of the regular part is oriented
        independently, with ``+1`` on its least simplex, or on the
        orientation hint for the component containing it.  Returns ``None``
        when no consistent choice exists over ``field``.
        """
        if self.boundary:
            raise ValueError("%s has boundary; no fundamental cycle" % self.name)
        if not self.is_connected():
            raise ValueError("%s is disconnected; orient components separately" % self.name)
        n = self.dim
        one = field.one
        signs: Dict[Simplex, object] = {}
        tops = self.simplices_of_dim(n)
        if self.orientation_hint is not None:
            tops = [self.orientation_hint] + [t for t in tops if t != self.orientation_hint]
        for start in tops:
            if start in signs:
                continue
            signs[start] = one
            stack = [start]
            while stack:
                s = stack.pop()
                for k, f in enumerate(facets(s)):
                    if self.levels[f] < n:
                        continue
                    induced = signs[s] * field.sign(k)
                    for t in self.cofaces[f]:
                        if t == s:
                            continue
                        want = -induced * field.sign(t.index(_missing(t, f)))
                        if t in signs:
                            if signs[t] != want:
                                return None
                        else:
                            signs[t] = want
                            stack.append(t)
        return signs

    def is_connected(self) -> bool:
        verts = self.vertices
        if not verts:
            return True
        uf = _UnionFind(verts)
        for e in self.simplices_of_dim(1):
            uf.union(e[0], e[1])
        return len({uf.find(v) for v in verts}) == 1

    def regular_components(self) -> List[List[Simplex]]:
        """Top simplices grouped by adjacency across regular facets."""
        n = self.dim
        tops = self.simplices_of_dim(n)
        uf = _UnionFind(tops)
        for f in self.simplices_of_dim(n - 1) if n > 0 else []:
            if self.levels[f] == n:
                cf = self.cofaces[f]
                for t in cf[1:]:
                    uf.union(cf[0], t)
        groups: Dict[Simplex, list] = {}
        for t in tops:
            groups.setdefault(uf.find(t), []).append(t)
        return sorted(groups.values())

    # -- ordinary homology oracle -----------------------------------------

    def boundary_matrix(self, k: int, field: Field = QQ) -> SparseMatrix:
        rows = self.simplices_of_dim(k - 1)
        cols = self.simplices_of_dim(k)
        idx = self.index
        entries = {}
        if k >= 1:
            for c, s in enumerate(cols):
                for j, f in enumerate(facets(s)):
                    entries[(idx[f], c)] = field.sign(j)
        return SparseMatrix.from_entries(len(rows), len(cols), field, entries)

    def simplicial_betti(self, field: Field = QQ) -> List[int]:
        ranks = [rank(self.boundary_matrix(k, field)) if k >= 1 else 0 for k in range(self.dim + 2)]
        return [len(self.simplices_of_dim(k)) - ranks[k] - ranks[k + 1] for k in range(self.dim + 1)]

    # -- misc --------------------------------------------------------------

    def with_name(self, name: str) -> "StratifiedComplex":
        return StratifiedComplex(name=name, dim=self.dim, levels=self.levels, boundary=self.boundary,
                                 orientation_hint=self.orientation_hint)

    def with_orientation_hint(self, top: Optional[Simplex]) -> "StratifiedComplex":
        """Same space; the fundamental cycle will carry ``+1`` on ``top``."""
        return StratifiedComplex(name=self.name, dim=self.dim, levels=self.levels,
                                 boundary=self.boundary, orientation_hint=top)

    def relabel(self, mapping: Mapping[int, int], name=None) -> "StratifiedComplex":
        """Rename vertices; the mapping must be injective."""
        def m(s):
            return tuple(sorted(mapping[v] for v in s))
        return StratifiedComplex(
            name=name or self.name, dim=self.dim,
            levels={m(s): lv for s, lv in self.levels.items()},
            boundary=frozenset(m(s) for s in self.boundary))

    def skeleta_generators(self) -> Dict[int, List[Simplex]]:
        """Minimal generators of each proper skeleton (maximal simplices of X^i not in X^{i-1})."""
        out: Dict[int, List[Simplex]] = {}
        for s, lv in self.levels.items():
            if lv >= self.dim:
                continue
            if any(self.levels[c] <= lv for c in self.cofaces[s]):
                continue
            out.setdefault(lv, []).append(s)
        return {i: sorted(v, key=lambda s: (len(s), s)) for i, v in sorted(out.items())}

    def top_simplices(self) -> List[Simplex]:
        return [s for s in sorted(self.levels, key=lambda s: (len(s), s)) if not self.cofaces[s]]

    def __repr__(self):
        return "StratifiedComplex(%r, dim=%d, f=%s, strata=%d)" % (
            self.name, self.dim, self.f_vector, len(self.strata))


def _missing(big: Simplex, small: Simplex) -> int:
    for v in big:
        if v not in small:
            return v
    raise ValueError("not a facet")


# --------------------------------------------------------------------------
# constructors


def simplex(n: int, name=None) -> StratifiedComplex:
    """The standard n-simplex with its boundary declared."""
    top = tuple(range(n + 1))
    bd = facets(top) if n > 0 else []
    return StratifiedComplex.from_data(name or "Delta%d" % n, [top], boundary=bd)


def boundary_of_simplex(n: int, name=None) -> StratifiedComplex:
    """The boundary of the (n+1)-simplex, a triangulated n-sphere."""
    return StratifiedComplex.from_data(name or "dDelta%d" % (n + 1), facets(tuple(range(n + 2))))


def _closed_check(L: StratifiedComplex, what: str):
    if L.boundary:
        raise ValueError("%s of a space with boundary is not supported" % what)


def cone(L: StratifiedComplex, name=None) -> StratifiedComplex:
    """Cone with apex 0; the link's vertices are shifted up by one."""
    _closed_check(L, "cone")
    n = L.dim + 1
    levels = {(0,): 0}
    for s, lv in L.levels.items():
        t = tuple(v + 1 for v in s)
        levels[t] = lv + 1
        levels[(0,) + t] = lv + 1
    bd = frozenset(tuple(v + 1 for v in s) for s in L.levels)
    return StratifiedComplex(name=name or "c(%s)" % L.name, dim=n, levels=levels, boundary=bd)


def suspension(L: StratifiedComplex, name=None) -> StratifiedComplex:
    """Two cones on ``L`` glued along it; apexes are vertices 0 and 1."""
    _closed_check(L, "suspension")
    n = L.dim + 1
    levels = {(0,): 0, (1,): 0}
    for s, lv in L.levels.items():
        t = tuple(v + 2 for v in s)
        levels[t] = lv + 1
        levels[(0,) + t] = lv + 1
        levels[(1,) + t] = lv + 1
    return StratifiedComplex(name=name or "S(%s)" % L.name, dim=n, levels=levels)


def _staircases(p: int, q: int):
    """Monotone lattice paths from (0,0) to (p,q)."""
    if p == 0 and q == 0:
        yield [(0, 0)]
        return
    if p > 0:
        for path in _staircases(p - 1, q):
            yield path + [(p, q)]
    if q > 0:
        for path in _staircases(p, q - 1):
            yield path + [(p, q)]


def product(X: StratifiedComplex, Y: StratifiedComplex, name=None) -> StratifiedComplex:
    """Staircase triangulation of ``|X| x |Y|`` for unstratified factors."""
    if not (X.is_trivially_stratified and Y.is_trivially_stratified):
        raise ValueError("unsupported-stratified-product: both factors must be trivially stratified")
    xv = X.vertices
    yv = Y.vertices
    xi = {v: k for k, v in enumerate(xv)}
    yi = {v: k for k, v in enumerate(yv)}
    ny = len(yv)
    tops = []
    for s in X.top_simplices():
        for t in Y.top_simplices():
            for path in _staircases(len(s) - 1, len(t) - 1):
                tops.append(tuple(xi[s[a]] * ny + yi[t[b]] for a, b in path))
    P = StratifiedComplex.from_data(name or "%sx%s" % (X.name, Y.name), tops)
    if X.boundary or Y.boundary:
        bd = [f for f in P.simplices_of_dim(P.dim - 1) if len(P.cofaces[f]) == 1]
        P = StratifiedComplex(name=P.name, dim=P.dim, levels=P.levels,
                              boundary=frozenset(closure(bd)))
    return P


def barycentric_subdivide(X: StratifiedComplex, name=None) -> StratifiedComplex:
    """First barycentric subdivision.

    The barycenter of ``tau`` gets the id of ``tau`` in the order
    (dimension, vertices), so every flag is listed from its smallest member
    up.  A flag inherits the level of its largest member.
    """
    order = sorted(X.levels, key=lambda s: (len(s), s))
    bid = {s: k for k, s in enumerate(order)}
    levels: Dict[Simplex, int] = {}
    bd = set()

    def chains(s):
        # all flags ending at s
        yield (s,)
        for f in faces(s)[:-1]:
            for ch in chains_cache[f]:
                yield ch + (s,)

    chains_cache: Dict[Simplex, list] = {}
    for s in order:
        chains_cache[s] = list(chains(s))
        for ch in chains_cache[s]:
            key = tuple(bid[t] for t in ch)
            levels[key] = X.levels[s]
            if s in X.boundary:
                bd.add(key)
    return StratifiedComplex(name=name or "sd(%s)" % X.name, dim=X.dim, levels=levels,
                             boundary=frozenset(bd))


def disjoint_union(X: StratifiedComplex, Y: StratifiedComplex, name=None) -> StratifiedComplex:
    if X.dim != Y.dim:
        raise ValueError("dimension mismatch")
    shift = max(X.vertices, default=-1) + 1
    Y2 = Y.relabel({v: v + shift for v in Y.vertices})
    levels = dict(X.levels)
    levels.update(Y2.levels)
    return StratifiedComplex(name=name or "%s+%s" % (X.name, Y.name), dim=X.dim, levels=levels,
                             boundary=X.boundary | Y2.boundary)
