"""Non-GM intersection chains and intersection homology.

For a space ``X`` and perversity ``p`` the degree-``i`` intersection chains
are the chains ``xi`` such that

* every simplex of ``xi`` is ``p``-allowable and not contained in ``X^{n-1}``;
* every simplex of ``d'xi`` is ``p``-allowable, where ``d'`` is the
  simplicial boundary with the coefficients on ``X^{n-1}`` set to zero.

The subspace is computed as the kernel of the map "apply ``d'`` and keep only
the coefficients on non-allowable simplices".  Kernel vectors come back in
reduced form (a ``1`` at their own free column, ``0`` at the others), which
makes coordinates of any intersection chain readable from its entries on the
free columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional

from .complex import Simplex, StratifiedComplex, faces, facets
from .exactfield import (QQ, Field, IncrementalBasis, SparseMatrix, kernel_basis,
                         kernel_with_free_columns, vec_add)
from .perversity import Perversity

Chain = Dict[Simplex, object]


def allowable(X: StratifiedComplex, s: Simplex, p: Perversity) -> bool:
    """Allowability of a single simplex with respect to ``p``."""
    i = len(s) - 1
    strata = X.strata
    where = X.stratum_of
    for f in faces(s):
        st = strata[where[f]]
        if st.codim and len(f) - 1 > i - st.codim + p(st):
            return False
    return True


def nongm_boundary(X: StratifiedComplex, chain: Mapping[Simplex, object]) -> Chain:
    """Simplicial boundary with coefficients on ``X^{n-1}`` set to zero."""
    out: Chain = {}
    n = X.dim
    lv = X.levels
    for s, c in chain.items():
        if not c:
            continue
        for k, f in enumerate(facets(s)):
            if lv[f] < n:
                continue
            v = out.get(f, 0) + (c if k % 2 == 0 else -c)
            if v:
                out[f] = v
            else:
                out.pop(f, None)
    return out


def _clean(chain):
    return {s: c for s, c in chain.items() if c}


@dataclass
class DegreeData:
    """Chain data in one degree."""

    allowable: List[Simplex]
    col: Dict[Simplex, int]
    basis: List[dict]          # kernel vectors over ``allowable`` indices
    free: List[int]            # free column of each basis vector

    @property
    def rank(self) -> int:
        return len(self.basis)


class IChainComplex:
    """The non-GM intersection chain complex of ``(X, p)`` over a field."""

    def __init__(self, X: StratifiedComplex, p: Perversity, field: Field = QQ):
        if p.space is not X:
            raise ValueError("perversity belongs to a different space")
        self.space = X
        self.perversity = p
        self.field = field
        self.dim = X.dim
        self._allow_cache: Dict[Simplex, bool] = {}
        self.degrees: Dict[int, DegreeData] = {}
        for i in range(X.dim + 1):
            self.degrees[i] = self._build_degree(i)

    def is_allowable(self, s: Simplex) -> bool:
        hit = self._allow_cache.get(s)
        if hit is None:
            hit = allowable(self.space, s, self.perversity)
            self._allow_cache[s] = hit
        return hit

    def _build_degree(self, i: int) -> DegreeData:
        X = self.space
        n = X.dim
        F = self.field
        A = [s for s in X.simplices_of_dim(i) if X.levels[s] == n and self.is_allowable(s)]
        col = {s: k for k, s in enumerate(A)}
        bad = [s for s in X.simplices_of_dim(i - 1) if X.levels[s] == n and not self.is_allowable(s)] \
            if i > 0 else []
        brow = {s: k for k, s in enumerate(bad)}
        entries = {}
        for c, s in enumerate(A):
            for k, f in enumerate(facets(s)):
                r = brow.get(f)
                if r is not None:
                    entries[(r, c)] = F.sign(k)
        M = SparseMatrix.from_entries(len(bad), len(A), F, entries)
        basis, free = kernel_with_free_columns(M)
        return DegreeData(A, col, basis, free)

    # -- conversions -------------------------------------------------------

    def rank(self, i: int) -> int:
        d = self.degrees.get(i)
        return d.rank if d else 0

    def basis_chain(self, i: int, k: int) -> Chain:
        d = self.degrees[i]
        return {d.allowable[c]: x for c, x in d.basis[k].items()}

    def to_chain(self, i: int, coords: Mapping[int, object]) -> Chain:
        d = self.degrees[i]
        out: dict = {}
        for k, a in coords.items():
            if a:
                out = vec_add(out, d.basis[k], a)
        return {d.allowable[c]: x for c, x in out.items()}

    def coordinates(self, i: int, chain: Mapping[Simplex, object]) -> Optional[dict]:
        """Coordinates of ``chain`` in the degree-``i`` basis, or None if it is not an intersection chain."""
        d = self.degrees.get(i)
        chain = _clean(chain)
        if d is None:
            return None if chain else {}
        for s in chain:
            if s not in d.col:
                return None
        coords = {}
        for k, f in enumerate(d.free):
            x = chain.get(d.allowable[f])
            if x:
                coords[k] = x
        if _clean(self.to_chain(i, coords)) != chain:
            return None
        return coords

    def contains(self, i: int, chain) -> bool:
        return self.coordinates(i, chain) is not None

    def boundary(self, chain: Mapping[Simplex, object]) -> Chain:
        return nongm_boundary(self.space, chain)

    @cached_property
    def differentials(self) -> Dict[int, SparseMatrix]:
        """``D[i]``: degree ``i`` to degree ``i-1`` in basis coordinates."""
        out = {}
        F = self.field
        for i in range(self.dim + 1):
            d = self.degrees[i]
            if i == 0:
                out[0] = SparseMatrix(0, d.rank, F)
                continue
            lower = self.degrees[i - 1]
            cols = {}
            for k in range(d.rank):
                bd = self.boundary(self.basis_chain(i, k))
                coords = {}
                for j, f in enumerate(lower.free):
                    x = bd.get(lower.allowable[f])
                    if x:
                        coords[j] = x
                cols[k] = coords
            out[i] = SparseMatrix(lower.rank, d.rank, F, cols)
        out[self.dim + 1] = SparseMatrix(self.degrees[self.dim].rank, 0, F)
        return out

    def check_d_squared(self) -> bool:
        D = self.differentials
        return all((D[i - 1] @ D[i]).is_zero() for i in range(1, self.dim + 1))

    def subcomplex_basis(self, i: int, avoid_vertex: int) -> List[dict]:
        """Coordinates of a basis for the chains avoiding ``avoid_vertex``."""
        d = self.degrees[i]
        keep = [c for c, s in enumerate(d.allowable) if avoid_vertex not in s]
        # chains avoiding v form the kernel restricted to the kept columns
        X = self.space
        F = self.field
        bad = [s for s in X.simplices_of_dim(i - 1) if X.levels[s] == X.dim and not self.is_allowable(s)] \
            if i > 0 else []
        brow = {s: k for k, s in enumerate(bad)}
        entries = {}
        for cc, c in enumerate(keep):
            for k, f in enumerate(facets(d.allowable[c])):
                r = brow.get(f)
                if r is not None:
                    entries[(r, cc)] = F.sign(k)
        M = SparseMatrix.from_entries(len(bad), len(keep), F, entries)
        out = []
        for v in kernel_basis(M):
            chain = {d.allowable[keep[c]]: x for c, x in v.items()}
            out.append(self.coordinates(i, chain))
        return out

    def __repr__(self):
        return "IChainComplex(%s, %s, ranks=%s)" % (
            self.space.name, self.perversity.label, [self.rank(i) for i in range(self.dim + 1)])


@dataclass
class HomologyDegree:
    dim: int
    representatives: List[dict]          # cycle coordinates
    _reducer: IncrementalBasis = field(repr=False, default=None)
    _n_boundary: int = 0
    _rep_index: Dict[int, int] = field(repr=False, default_factory=dict)

    def project(self, z: Mapping[int, object]) -> Optional[dict]:
        """Homology coordinates of a cycle (None if not a cycle of this span)."""
        combo = self._reducer.express(z)
        if combo is None:
            return None
        out = {}
        for idx, x in combo.items():
            if idx >= self._n_boundary:
                k = self._rep_index[idx]
                out[k] = x
        return out


@dataclass
class HomologyResult:
    complex: IChainComplex
    degrees: Dict[int, HomologyDegree]
    relative_to: Optional[int] = None

    @property
    def dims(self) -> List[int]:
        return [self.degrees[i].dim for i in sorted(self.degrees)]

    def representative_chain(self, i: int, k: int) -> Chain:
        return self.complex.to_chain(i, self.degrees[i].representatives[k])

    def project_chain(self, i: int, chain) -> Optional[dict]:
        coords = self.complex.coordinates(i, chain)
        if coords is None:
            return None
        return self.degrees[i].project(coords)


def _homology_degree(cycles: List[dict], boundaries: List[dict]) -> HomologyDegree:
    red = IncrementalBasis()
    for b in boundaries:
        red.add(b)
    nb = red.count
    reps = []
    rep_index = {}
    for z in cycles:
        idx = red.count
        if red.add(z):
            rep_index[idx] = len(reps)
            reps.append(z)
    return HomologyDegree(len(reps), reps, red, nb, rep_index)


def homology(C: IChainComplex) -> HomologyResult:
    """Intersection homology with explicit representatives in every degree."""
    D = C.differentials
    out = {}
    for i in range(C.dim + 1):
        Z = kernel_basis(D[i]) if D[i].ncols else []
        B = D[i + 1].columns()
        out[i] = _homology_degree(Z, B)
    return HomologyResult(C, out)


def relative_homology(C: IChainComplex, v: int) -> HomologyResult:
    """Local intersection homology at the vertex ``v``.

    The subcomplex modelling ``X - {v}`` consists of the intersection chains
    none of whose simplices contains ``v``.
    """
    if (v,) not in C.space.levels:
        raise ValueError("%r is not a vertex" % (v,))
    D = C.differentials
    F = C.field
    S = {i: C.subcomplex_basis(i, v) for i in range(C.dim + 1)}
    out = {}
    for i in range(C.dim + 1):
        r_i = C.rank(i)
        if i == 0:
            cycles = [{k: F.one} for k in range(r_i)]
        else:
            # relative cycles: D z in span(S_{i-1})
            lower = S[i - 1]
            stacked = D[i].hstack(SparseMatrix.from_columns(C.rank(i - 1), F, lower).scale(-1))
            cycles = []
            seen = IncrementalBasis()
            for w in kernel_basis(stacked):
                z = {k: x for k, x in w.items() if k < r_i}
                if z and seen.add(z):
                    cycles.append(z)
        bounds = D[i + 1].columns() + S[i]
        out[i] = _homology_degree(cycles, bounds)
    return HomologyResult(C, out, relative_to=v)


def build(X: StratifiedComplex, p: Perversity, field: Field = QQ) -> IChainComplex:
    return IChainComplex(X, p, field)


def ih_dims(X: StratifiedComplex, p: Perversity, field: Field = QQ) -> List[int]:
    return homology(build(X, p, field)).dims


def link_perversity(cL: StratifiedComplex, L: StratifiedComplex, p: Perversity) -> Perversity:
    """Restrict a perversity on ``cone(L)`` to the link (vertex ids shifted by one)."""
    vals = {}
    for st in L.singular_strata:
        s = tuple(v + 1 for v in st.simplices[0])
        vals[st.index] = p(cL.stratum_of[s])
    return Perversity(L, vals, p.name)


def apex_value(cL: StratifiedComplex, p: Perversity) -> int:
    return p(cL.stratum_of[(0,)])


def cone_formula_oracle(L: StratifiedComplex, p: Perversity, field: Field = QQ,
                        cL: Optional[StratifiedComplex] = None) -> List[int]:
    """Predicted intersection homology of the cone from that of the link.

    ``p`` is a perversity on ``cL`` (the cone built by :func:`complex.cone`).
    Degrees below ``n - 1 - p(apex)`` copy the link; the rest vanish.
    """
    cL = cL if cL is not None else p.space
    n = L.dim + 1
    cut = n - 1 - apex_value(cL, p)
    link = ih_dims(L, link_perversity(cL, L, p), field)
    return [link[i] if i < cut and i < len(link) else 0 for i in range(n + 1)]
