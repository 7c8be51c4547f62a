"""Transporting a graded product across a degree-n chain isomorphism.

Setting: cohomologically graded complexes ``A`` and ``B``, a degree-``n``
chain isomorphism ``f: A -> B`` with inverse ``g``, and an associative,
graded-commutative, unital degree-0 product ``P`` on ``A`` (written
``a [+] b``).  The candidate products on ``B`` are

* ``Q(a, b)   = (-1)^(n + n|a|) f(g a [+] g b)``   (``f P (f x f)^-1``)
* ``Q'(a, b)  = (-1)^(n|a|) f(g a [+] g b)``        (``f P (g x g)``)
* ``Q''(a, b) = (-1)^(n|a|) Q'(a, b)``
* ``a . b     = f(g a [+] g b)``
* ``R(a~, b~) = t^n f(g a [+] g b)`` on the shift ``B[n]``

Koszul rules: ``(h x k)(a x b) = (-1)^(|k||a|) h(a) x k(b)`` and
``d(a x b) = da x b + (-1)^|a| a x db``.  A degree-``k`` map ``h`` is a chain
map when ``d h = (-1)^k h d``.  Elements are homogeneous throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .exactfield import QQ, Field, SparseMatrix, inverse, rank, vec_add


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class Elem:
    """A homogeneous element: degree plus sparse coordinate vector."""

    deg: int
    vec: Tuple[Tuple[int, object], ...]

    @classmethod
    def make(cls, deg: int, vec: Mapping):
        return cls(deg, tuple(sorted((k, x) for k, x in vec.items() if x)))

    @property
    def coords(self) -> dict:
        return dict(self.vec)

    def __bool__(self):
        return bool(self.vec)

    def scale(self, c) -> "Elem":
        return Elem.make(self.deg, {k: c * x for k, x in self.vec})

    def __add__(self, other: "Elem") -> "Elem":
        if not other:
            return self
        if not self:
            return other
        if self.deg != other.deg:
            raise ValueError("adding elements of degrees %d and %d" % (self.deg, other.deg))
        return Elem.make(self.deg, vec_add(self.coords, other.coords))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def same(self, other: "Elem") -> bool:
        """Equality allowing zero elements of any degree to match."""
        if not self and not other:
            return True
        return self.deg == other.deg and self.vec == other.vec


def zero(deg: int) -> Elem:
    return Elem(deg, ())


@dataclass
class GradedComplex:
    """Finite-dimensional cochain complex: ``d[k]: C^k -> C^(k+1)``."""

    field: Field
    dims: Dict[int, int]
    d: Dict[int, SparseMatrix]

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    @property
    def degrees(self) -> List[int]:
        return sorted(k for k, v in self.dims.items() if v)

    def differential(self, x: Elem) -> Elem:
        M = self.d.get(x.deg)
        if M is None or not x:
            return zero(x.deg + 1)
        return Elem.make(x.deg + 1, M.apply(x.coords))

    def check(self) -> bool:
        return all((self.d[k + 1] @ self.d[k]).is_zero()
                   for k in self.d if k + 1 in self.d)

    def basis(self, k: int) -> List[Elem]:
        return [Elem.make(k, {i: self.field.one}) for i in range(self.dim(k))]

    def random_element(self, rng, k: Optional[int] = None, bound: int = 3) -> Elem:
        if k is None:
            k = rng.choice(self.degrees)
        F = self.field
        return Elem.make(k, {i: F.random(rng, bound) for i in range(self.dim(k))})


@dataclass
class GradedMap:
    """A map of a fixed degree given by one matrix per source degree."""

    degree: int
    matrices: Dict[int, SparseMatrix]

    def __call__(self, x: Elem) -> Elem:
        if not x:
            return zero(x.deg + self.degree)
        M = self.matrices[x.deg]
        return Elem.make(x.deg + self.degree, M.apply(x.coords))


# Tensors are lists of (scalar, left, right) terms.
Tensor = List[Tuple[object, Elem, Elem]]


def tensor_d(A: GradedComplex, B: GradedComplex, a: Elem, b: Elem) -> Tensor:
    return [(1, A.differential(a), b), (_sgn(a.deg), a, B.differential(b))]


def tensor_apply(h: Callable, hdeg: int, k: Callable, kdeg: int, t: Tensor) -> Tensor:
    """``(h x k)`` with the Koszul sign ``(-1)^(|k||a|)``."""
    return [(c * _sgn(kdeg * a.deg), h(a), k(b)) for c, a, b in t]


def tensor_equal(s: Tensor, t: Tensor) -> bool:
    """Compare two tensors as elements of the tensor product."""
    def collect(terms):
        out: Dict[Tuple, object] = {}
        for c, a, b in terms:
            if not c or not a or not b:
                continue
            for i, x in a.vec:
                for j, y in b.vec:
                    key = (a.deg, i, b.deg, j)
                    v = out.get(key, 0) + c * x * y
                    if v:
                        out[key] = v
                    else:
                        out.pop(key)
        return out
    return collect(s) == collect(t)


def sum_elems(terms: Sequence[Elem], deg: int) -> Elem:
    out = zero(deg)
    for e in terms:
        if e:
            out = out + e
    return out


# --------------------------------------------------------------------------
# the test algebra


@dataclass
class TestAlgebra:
    """``F[y]/(y^m) (x) Lambda(x) (x) Lambda(z_1..z_k)`` with ``dx = y``.

    ``|y| = 2``, ``|x| = 1``, each ``z`` has an odd degree and ``dz = 0``.
    Monomials are written ``y^a x^e z_S`` in that order.
    """

    __test__ = False

    field: Field
    m: int
    zdegs: Tuple[int, ...]

    def __post_init__(self):
        mons = []
        for a in range(self.m):
            for e in (0, 1):
                for r in range(len(self.zdegs) + 1):
                    for S in combinations(range(len(self.zdegs)), r):
                        mons.append((a, e, S))
        bydeg: Dict[int, list] = {}
        for mon in mons:
            bydeg.setdefault(self.mdeg(mon), []).append(mon)
        for k in bydeg:
            bydeg[k].sort()
        self.monomials = bydeg
        self.position = {mon: (k, i) for k, ms in bydeg.items() for i, mon in enumerate(ms)}

    def mdeg(self, mon) -> int:
        a, e, S = mon
        return 2 * a + e + sum(self.zdegs[s] for s in S)

    def _mul_mon(self, u, v):
        (a, e, S), (b, f, T) = u, v
        if a + b >= self.m or (e and f):
            return 0, None
        sign = 1
        # move x^f left past z_S (z's are odd)
        if f and len(S) % 2:
            sign = -sign
        if set(S) & set(T):
            return 0, None
        # merge z_S z_T into sorted order
        merged = list(S) + list(T)
        inv = sum(1 for p in range(len(merged)) for q in range(p + 1, len(merged)) if merged[p] > merged[q])
        if inv % 2:
            sign = -sign
        return sign, (a + b, e or f, tuple(sorted(merged)))

    def complex(self) -> GradedComplex:
        F = self.field
        dims = {k: len(v) for k, v in self.monomials.items()}
        d = {}
        for k in range(min(dims), max(dims) + 1):
            cols = {}
            for i, (a, e, S) in enumerate(self.monomials.get(k, [])):
                if e and a + 1 < self.m:
                    kk, j = self.position[(a + 1, 0, S)]
                    cols[i] = {j: F.one}
            d[k] = SparseMatrix(dims.get(k + 1, 0), dims.get(k, 0), F, cols)
        return GradedComplex(F, dims, d)

    def product(self) -> Callable[[Elem, Elem], Elem]:
        F = self.field

        def P(u: Elem, v: Elem) -> Elem:
            deg = u.deg + v.deg
            out: dict = {}
            for i, x in u.vec:
                mu = self.monomials[u.deg][i]
                for j, y in v.vec:
                    mv = self.monomials[v.deg][j]
                    s, w = self._mul_mon(mu, mv)
                    if w is None:
                        continue
                    _, k = self.position[w]
                    val = out.get(k, 0) + s * x * y
                    if val:
                        out[k] = val
                    else:
                        out.pop(k)
            return Elem.make(deg, {k: F(v) for k, v in out.items()})
        return P

    def unit(self) -> Elem:
        _, i = self.position[(0, 0, ())]
        return Elem.make(0, {i: self.field.one})


# --------------------------------------------------------------------------
# degree-n isomorphisms and transported products


def _random_invertible(k: int, F: Field, rng) -> SparseMatrix:
    while True:
        M = SparseMatrix.from_dense([[F.random(rng, 2) for _ in range(k)] for _ in range(k)], F)
        if rank(M) == k:
            return M


@dataclass
class ProductSystem:
    """Data ``(A, P, unit, f, g, B, n)`` plus every transported product."""

    A: GradedComplex
    P: Callable[[Elem, Elem], Elem]
    unit: Elem
    f: GradedMap
    g: GradedMap
    B: GradedComplex
    n: int
    meta: dict = field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.A.field

    @property
    def u(self) -> Elem:
        """Image of the unit, of degree ``n``."""
        return self.f(self.unit)

    def _fPg(self, a: Elem, b: Elem) -> Elem:
        return self.f(self.P(self.g(a), self.g(b)))

    def Q(self, a, b):
        return self._fPg(a, b).scale(_sgn(self.n + self.n * a.deg))

    def Qp(self, a, b):
        return self._fPg(a, b).scale(_sgn(self.n * a.deg))

    def Qpp(self, a, b):
        return self.Qp(a, b).scale(_sgn(self.n * a.deg))

    def bullet(self, a, b):
        return self._fPg(a, b)

    # shifted complex B[n]: element x~ of degree k is x in B^(k+n)

    def shift_complex(self) -> GradedComplex:
        F = self.field
        n = self.n
        dims = {k - n: v for k, v in self.B.dims.items()}
        d = {k - n: M.scale(F.sign(n)) for k, M in self.B.d.items()}
        return GradedComplex(F, dims, d)

    def s(self, xbar: Elem) -> Elem:
        return Elem(xbar.deg + self.n, xbar.vec)

    def t(self, x: Elem) -> Elem:
        return Elem(x.deg - self.n, x.vec)

    def R(self, abar, bbar):
        return self.t(self._fPg(self.s(abar), self.s(bbar)))

    def Rp(self, abar, bbar):
        return self.R(abar, bbar).scale(_sgn(self.n))

    # literal composites with Koszul signs

    def Q_literal(self, a, b):
        n = self.n
        t = tensor_apply(self.g, -n, self.g, -n, [(self.field.sign(n), a, b)])
        return sum_elems([self.f(self.P(x, y)).scale(c) for c, x, y in t], a.deg + b.deg - n)

    def Qp_literal(self, a, b):
        n = self.n
        t = tensor_apply(self.g, -n, self.g, -n, [(1, a, b)])
        return sum_elems([self.f(self.P(x, y)).scale(c) for c, x, y in t], a.deg + b.deg - n)

    def R_literal(self, abar, bbar):
        n = self.n
        t = tensor_apply(self.s, n, self.s, n, [(1, abar, bbar)])
        t = tensor_apply(self.g, -n, self.g, -n, [(c * self.field.sign(n), x, y) for c, x, y in t])
        return sum_elems([self.t(self.f(self.P(x, y))).scale(c) for c, x, y in t], abar.deg + bbar.deg)

    def Rp_literal(self, abar, bbar):
        n = self.n
        t = tensor_apply(self.s, n, self.s, n, [(1, abar, bbar)])
        t = tensor_apply(self.g, -n, self.g, -n, t)
        return sum_elems([self.t(self.f(self.P(x, y))).scale(c) for c, x, y in t], abar.deg + bbar.deg)

    # chain-map defects

    def chain_map_defect(self, prod, C: GradedComplex, a: Elem, b: Elem, degree: int) -> bool:
        """True when ``d prod(a, b) = (-1)^degree prod(d(a x b))`` for this pair."""
        lhs = C.differential(prod(a, b))
        terms = [prod(x, y).scale(c) for c, x, y in tensor_d(C, C, a, b) if x and y]
        rhs = sum_elems(terms, a.deg + b.deg + degree + 1).scale(_sgn(degree))
        return lhs.same(rhs)

    def random(self, rng, C: Optional[GradedComplex] = None, k=None) -> Elem:
        return (C or self.B).random_element(rng, k)


def random_system(n: int, rng, field: Field = QQ) -> ProductSystem:
    """A random test algebra with a random degree-``n`` chain isomorphism.

    ``B^(k+n) = F^dim(A^k)`` with ``f = M_k`` and ``d_B = (-1)^n M d_A M^-1``,
    so ``f`` is a degree-``n`` chain map by construction.
    """
    m = rng.randint(1, 3)
    nz = rng.randint(0, 2)
    zdegs = tuple(sorted(rng.choice((1, 3)) for _ in range(nz)))
    T = TestAlgebra(field, m, zdegs)
    A = T.complex()
    Ms = {k: _random_invertible(A.dim(k), field, rng) for k in A.dims}
    Minv = {k: inverse(M) for k, M in Ms.items()}
    sign = field.sign(n)
    dB = {}
    for k in range(min(A.dims) - 1, max(A.dims) + 1):
        dk = A.d.get(k)
        if dk is None or k + 1 not in Ms or k not in Ms:
            continue
        dB[k + n] = (Ms[k + 1] @ dk @ Minv[k]).scale(sign)
    B = GradedComplex(field, {k + n: v for k, v in A.dims.items()}, dB)
    f = GradedMap(n, Ms)
    g = GradedMap(-n, {k + n: M for k, M in Minv.items()})
    return ProductSystem(A, T.product(), T.unit(), f, g, B, n,
                         {"m": m, "zdegs": zdegs})


# --------------------------------------------------------------------------
# laws


LAWS = (
    "tensor-inverse",
    "Q=(-1)^n Q'",
    "Q' associativity defect",
    "Q' commutativity defect",
    "Q' units",
    "Q'' not a chain map",
    "bullet laws",
    "R laws",
)


def check_laws(S: ProductSystem, rng) -> Dict[str, bool]:
    """Evaluate every identity once on random homogeneous elements of ``S``."""
    n = S.n
    F = S.field
    B = S.B
    a, b, c = S.random(rng), S.random(rng), S.random(rng)
    out = {}

    # (f x f)^-1 = (-1)^n g x g on B x B
    t = tensor_apply(S.g, -n, S.g, -n, [(F.sign(n), a, b)])
    t = tensor_apply(S.f, n, S.f, n, t)
    out["tensor-inverse"] = tensor_equal(t, [(1, a, b)])

    # the closed forms must also agree with the literal Koszul composites
    out["Q=(-1)^n Q'"] = (S.Q(a, b).same(S.Qp(a, b).scale(F.sign(n)))
                          and S.Q(a, b).same(S.Q_literal(a, b)) and S.Qp(a, b).same(S.Qp_literal(a, b))
                          and S.chain_map_defect(S.Q, B, a, b, -n)
                          and S.chain_map_defect(S.Qp, B, a, b, -n))

    lhs = S.Qp(S.Qp(a, b), c)
    rhs = S.Qp(a, S.Qp(b, c))
    out["Q' associativity defect"] = lhs.same(rhs.scale(_sgn(n + n * a.deg)))
    out["Q' commutativity defect"] = S.Qp(a, b).same(S.Qp(b, a).scale(_sgn(a.deg * b.deg + n)))
    u = S.u
    out["Q' units"] = S.Qp(u, b).same(b.scale(_sgn(n))) and S.Qp(a, u).same(a.scale(_sgn(n * a.deg)))

    # Q'' fails the chain-map law exactly when n is odd; a witness needs da != 0 and b = u.
    # In characteristic 2 there are no signs and Q'' is a chain map.
    if n % 2 and F.characteristic != 2:
        witness = _witness_Qpp(S)
        out["Q'' not a chain map"] = (witness is not None) == _has_nonzero_differential(B)
    else:
        out["Q'' not a chain map"] = S.chain_map_defect(S.Qpp, B, a, b, -n)

    bl = S.bullet
    out["bullet laws"] = (bl(bl(a, b), c).same(bl(a, bl(b, c)))
                          and bl(u, b).same(b) and bl(a, u).same(a)
                          and bl(a, b).same(bl(b, a).scale(_sgn((a.deg - n) * (b.deg - n)))))

    Bn = S.shift_complex()
    ab, bb, cb = S.t(a), S.t(b), S.t(c)
    ub = S.t(u)
    R = S.R
    out["R laws"] = (R(R(ab, bb), cb).same(R(ab, R(bb, cb)))
                     and R(ub, bb).same(bb) and R(ab, ub).same(ab)
                     and R(ab, bb).same(R(bb, ab).scale(_sgn(ab.deg * bb.deg)))
                     and S.chain_map_defect(R, Bn, ab, bb, 0)
                     and R(ab, bb).same(S.R_literal(ab, bb))
                     and S.Rp(ab, bb).same(S.Rp_literal(ab, bb))
                     and (n != 0 or (S.Q(a, b).same(S.Qp(a, b)) and S.Q(a, b).vec == R(ab, bb).vec)))
    return out


def _has_nonzero_differential(C: GradedComplex) -> bool:
    return any(not M.is_zero() for M in C.d.values())


def _witness_Qpp(S: ProductSystem) -> Optional[Tuple[Elem, Elem]]:
    """A pair on which ``Q''`` breaks the degree ``-n`` chain-map law."""
    B = S.B
    u = S.u
    for k in B.degrees:
        for a in B.basis(k):
            if B.differential(a) and not S.chain_map_defect(S.Qpp, B, a, u, -S.n):
                return a, u
    return None


def run_trials(n: int, trials: int, seed: int = 0, field: Field = QQ) -> Dict[str, Tuple[int, int]]:
    """Pass counts per law over ``trials`` random systems."""
    rng = random.Random("signcalc:%d:%d" % (seed, n))
    tally = {law: [0, 0] for law in LAWS}
    for _ in range(trials):
        S = random_system(n, rng, field)
        for law, ok in check_laws(S, rng).items():
            tally[law][0] += bool(ok)
            tally[law][1] += 1
    return {law: (p, t) for law, (p, t) in tally.items()}


# --------------------------------------------------------------------------
# defect report


@dataclass
class DefectReport:
    name: str
    n: int
    associativity: Dict[Tuple[int, int, int], int]
    commutativity: Dict[Tuple[int, int], int]
    left_unit: Dict[int, int]
    right_unit: Dict[int, int]
    chain_map: bool

    def trivial(self) -> bool:
        return (set(self.associativity.values()) <= {1} and set(self.commutativity.values()) <= {1}
                and set(self.left_unit.values()) <= {1} and set(self.right_unit.values()) <= {1})


def _ratio(x: Elem, y: Elem) -> Optional[int]:
    """The sign s with x = s*y, None if undetermined, 0 if not a sign multiple."""
    if not x and not y:
        return None
    if x.same(y):
        return 1
    if x.same(-y):
        return -1
    return 0


def _merge(table, key, s):
    if s is None:
        return
    old = table.get(key)
    if old is None:
        table[key] = s
    elif old != s:
        table[key] = 0


def defect_report(S: ProductSystem, which: str) -> DefectReport:
    """Measure sign defects of a product exhaustively over basis elements.

    ``which`` is one of ``Q``, ``Q'``, ``Q''``, ``bullet``, ``R``.  For the
    graded-commutativity entry the reference sign is ``(-1)^(|a||b|)`` so a
    recorded ``1`` means the product is graded commutative in that bidegree.
    """
    n = S.n
    if which == "R":
        C = S.shift_complex()
        prod = S.R
        u = S.t(S.u)
        deg = 0
    else:
        C = S.B
        prod = {"Q": S.Q, "Q'": S.Qp, "Q''": S.Qpp, "bullet": S.bullet}[which]
        u = S.u
        deg = -n
    basis = [e for k in C.degrees for e in C.basis(k)]
    assoc, comm, lu, ru = {}, {}, {}, {}
    chain = True
    for a in basis:
        _merge(lu, a.deg, _ratio(prod(u, a), a))
        _merge(ru, a.deg, _ratio(prod(a, u), a))
        for b in basis:
            _merge(comm, (a.deg, b.deg), _ratio(prod(a, b), prod(b, a).scale(_sgn(a.deg * b.deg))))
            if not S.chain_map_defect(prod, C, a, b, deg):
                chain = False
            for c in basis:
                _merge(assoc, (a.deg, b.deg, c.deg), _ratio(prod(prod(a, b), c), prod(a, prod(b, c))))
    return DefectReport(which, n, assoc, comm, lu, ru, chain)


def predicted_defects(which: str, n: int):
    """Closed-form defect signs as functions of degrees."""
    if which in ("Q", "Q'"):
        return {
            "associativity": lambda a, b, c: _sgn(n + n * a),
            "commutativity": lambda a, b: _sgn(n),
            "left_unit": (lambda a: 1) if which == "Q" else (lambda a: _sgn(n)),
            "right_unit": (lambda a: _sgn(n + n * a)) if which == "Q" else (lambda a: _sgn(n * a)),
        }
    if which == "bullet" or which == "Q''":
        return {
            "associativity": lambda a, b, c: 1,
            "commutativity": lambda a, b: _sgn((a - n) * (b - n) + a * b),
            "left_unit": lambda a: 1,
            "right_unit": lambda a: 1,
        }
    if which == "R":
        return {
            "associativity": lambda a, b, c: 1,
            "commutativity": lambda a, b: 1,
            "left_unit": lambda a: 1,
            "right_unit": lambda a: 1,
        }
    raise ValueError(which)


def compare_with_prediction(rep: DefectReport) -> List[str]:
    """Mismatches between a measured report and the closed forms."""
    pred = predicted_defects(rep.name, rep.n)
    bad = []
    for key, s in rep.associativity.items():
        if s != pred["associativity"](*key):
            bad.append("associativity %s: %s" % (key, s))
    for key, s in rep.commutativity.items():
        if s != pred["commutativity"](*key):
            bad.append("commutativity %s: %s" % (key, s))
    for key, s in rep.left_unit.items():
        if s != pred["left_unit"](key):
            bad.append("left unit %s: %s" % (key, s))
    for key, s in rep.right_unit.items():
        if s != pred["right_unit"](key):
            bad.append("right unit %s: %s" % (key, s))
    return bad


# --------------------------------------------------------------------------
# systems built from matrices (used by the cube check)


def system_from_tables(field: Field, dims: Dict[int, int], product_table, unit: Elem,
                       f_mats: Dict[int, SparseMatrix], n: int) -> ProductSystem:
    """A system with zero differentials from explicit structure constants.

    ``product_table[(k, l)][i][j]`` is the coordinate dict of ``e^k_i [+] e^l_j``.
    """
    A = GradedComplex(field, dict(dims), {k: SparseMatrix(dims.get(k + 1, 0), dims[k], field)
                                          for k in dims})

    def P(u: Elem, v: Elem) -> Elem:
        out: dict = {}
        tab = product_table.get((u.deg, v.deg))
        for i, x in u.vec:
            for j, y in v.vec:
                if tab is None:
                    continue
                out = vec_add(out, tab[i][j], x * y)
        return Elem.make(u.deg + v.deg, out)

    g_mats = {k + n: inverse(M) for k, M in f_mats.items()}
    B = GradedComplex(field, {k + n: v for k, v in dims.items()},
                      {k + n: SparseMatrix(dims.get(k + 1, 0), dims[k], field) for k in dims})
    return ProductSystem(A, P, unit, GradedMap(n, f_mats), GradedMap(-n, g_mats), B, n)


# --------------------------------------------------------------------------
# squares: does a transported product commute with f?


def square_defects(S: ProductSystem, which: str) -> Dict[Tuple[int, int], int]:
    """Sign ``s`` with ``prod((f x f)(a x b)) = s f(a [+] b)``, per bidegree of ``A``.

    ``f x f`` carries the Koszul sign ``(-1)^(n|a|)``.  Entries are 0 when the
    ratio is not a constant sign; bidegrees where both sides vanish are omitted.
    """
    prod = {"Q": S.Q, "Q'": S.Qp, "Q''": S.Qpp, "bullet": S.bullet}[which]
    n = S.n
    out: Dict[Tuple[int, int], int] = {}
    basis = [e for k in S.A.degrees for e in S.A.basis(k)]
    for a in basis:
        for b in basis:
            lhs = prod(S.f(a), S.f(b)).scale(_sgn(n * a.deg))
            rhs = S.f(S.P(a, b))
            _merge(out, (a.deg, b.deg), _ratio(lhs, rhs))
    return out


def predicted_square_sign(which: str, n: int, i: int) -> int:
    """Closed form of :func:`square_defects` for left argument in degree ``i``."""
    if which == "Q":
        return 1
    if which == "Q'":
        return _sgn(n)
    if which == "Q''":
        return _sgn(n + n * (i + n))
    if which == "bullet":
        return _sgn(n * i)
    raise ValueError(which)
