"""Cochains, cup and cap products, evaluation maps and signed duality.

Sign conventions
----------------
* coboundary: ``(d alpha)(x) = (-1)^(|alpha|+1) alpha(d x)``
* cup: ``(alpha u beta)(s) = (-1)^(ij) alpha(s[0..i]) beta(s[i..i+j])``
* cap: ``alpha n s = (-1)^(j(m-j)) alpha(s[m-j..m]) s[0..m-j]``

With these, ``d(a u b) = da u b + (-1)^i a u db``, ``aug(a n x) = a(x)`` in
matching degrees, ``(a u b) n x = a n (b n x)`` and
``d(a n x) = da n x + (-1)^j a n dx``.  The test suite confirms that no
other front/back choice with the usual candidate signs satisfies all of them.

Ordinary cochains and chains are dicts keyed by simplices.  Intersection
cochains are vectors of values on the basis chains of an
:class:`~ihdual.ichains.IChainComplex`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .complex import Simplex, StratifiedComplex, facets
from .exactfield import (Field, IncrementalBasis, SparseMatrix, inverse, kernel_basis, rank,
                         solve_many, vec_add)
from .ichains import HomologyResult, IChainComplex, build, homology
from .perversity import Perversity

Cochain = Dict[Simplex, object]
Chain = Dict[Simplex, object]


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


# --------------------------------------------------------------------------
# ordinary cochain operations


def evaluate(alpha: Mapping, chain: Mapping):
    """``alpha(chain)`` for an ordinary cochain and a chain."""
    total = 0
    for s, c in chain.items():
        a = alpha.get(s)
        if a:
            total = total + a * c
    return total


def coboundary(X: StratifiedComplex, alpha: Mapping, i: int) -> Cochain:
    """Ordinary coboundary of a degree-``i`` cochain with the Dold sign."""
    out: Cochain = {}
    sign = _sgn(i + 1)
    for s in X.simplices_of_dim(i + 1):
        v = 0
        for k, f in enumerate(facets(s)):
            a = alpha.get(f)
            if a:
                v = v + (a if k % 2 == 0 else -a)
        if v:
            out[s] = sign * v
    return out


def chain_boundary(chain: Mapping) -> Chain:
    out: Chain = {}
    for s, c in chain.items():
        for k, f in enumerate(facets(s)):
            v = out.get(f, 0) + (c if k % 2 == 0 else -c)
            if v:
                out[f] = v
            else:
                out.pop(f, None)
    return out


def cup(X: StratifiedComplex, alpha: Mapping, i: int, beta: Mapping, j: int) -> Cochain:
    """Front-face/back-face cup product of ordinary cochains."""
    out: Cochain = {}
    sign = _sgn(i * j)
    for s in X.simplices_of_dim(i + j):
        a = alpha.get(s[:i + 1])
        if not a:
            continue
        b = beta.get(s[i:])
        if b:
            out[s] = sign * a * b
    return out


def cap(alpha: Mapping, j: int, chain: Mapping) -> Chain:
    """Cap a degree-``j`` cochain into a chain (cochain read on back faces)."""
    out: Chain = {}
    for s, c in chain.items():
        m = len(s) - 1
        if m < j:
            continue
        a = alpha.get(s[m - j:])
        if not a:
            continue
        f = s[:m - j + 1]
        v = out.get(f, 0) + _sgn(j * (m - j)) * a * c
        if v:
            out[f] = v
        else:
            out.pop(f, None)
    return out


def aug(chain: Mapping):
    """Sum of coefficients on 0-simplices."""
    total = 0
    for s, c in chain.items():
        if len(s) == 1:
            total = total + c
    return total


def unit_cochain(X: StratifiedComplex, field: Field) -> Cochain:
    return {s: field.one for s in X.simplices_of_dim(0)}


# --------------------------------------------------------------------------
# parametrised conventions (for the sign solver)


@dataclass(frozen=True)
class Convention:
    """One candidate sign choice for cup and cap, plus which face the cap reads."""

    cup_exponent: str         # "0", "ij", "i", "j"
    cap_exponent: str         # "0", "jm", "j(m-j)", "m(m-j)"
    face: str = "back"        # "back": cap reads the cochain on the back face

    def cup_sign(self, i: int, j: int) -> int:
        return _sgn({"0": 0, "ij": i * j, "i": i, "j": j}[self.cup_exponent])

    def cap_sign(self, j: int, m: int) -> int:
        e = {"0": 0, "jm": j * m, "j(m-j)": j * (m - j), "m(m-j)": m * (m - j)}[self.cap_exponent]
        return _sgn(e)

    def cup(self, X, alpha, i, beta, j):
        out = {}
        sign = self.cup_sign(i, j)
        for s in X.simplices_of_dim(i + j):
            if self.face == "back":
                a, b = alpha.get(s[:i + 1]), beta.get(s[i:])
            else:
                a, b = alpha.get(s[j:]), beta.get(s[:j + 1])
            if a and b:
                out[s] = sign * a * b
        return out

    def cap(self, alpha, j, chain):
        out = {}
        for s, c in chain.items():
            m = len(s) - 1
            if m < j:
                continue
            if self.face == "back":
                a, f = alpha.get(s[m - j:]), s[:m - j + 1]
            else:
                a, f = alpha.get(s[:j + 1]), s[j:]
            if a:
                out[f] = out.get(f, 0) + self.cap_sign(j, m) * a * c
        return {k: v for k, v in out.items() if v}


def all_conventions(faces=("back",)) -> List[Convention]:
    """The 16 sign candidates for each requested face choice.

    With the cup reading alpha on the front face only one candidate survives
    the contracts.  The mirror face choice (reverse every vertex order) has a
    survivor of its own, which is why it is not part of the default search.
    """
    return [Convention(c, e, face) for face in faces for c in ("0", "ij", "i", "j")
            for e in ("0", "jm", "j(m-j)", "m(m-j)")]


DEFAULT_CONVENTION = Convention("ij", "j(m-j)")


def convention_violations(conv: Convention, X: StratifiedComplex, field: Field, rng,
                          trials: int = 20) -> List[str]:
    """Contracts failed by ``conv`` on random cochains of ``X``."""
    failed = []
    n = X.dim

    def rand(i):
        return {s: field.random(rng, 2) for s in X.simplices_of_dim(i) if rng.random() < 0.7}

    one = unit_cochain(X, field)
    for _ in range(trials):
        i = rng.randint(0, n)
        j = rng.randint(0, n - i)
        a, b = rand(i), rand(j)
        if i + j + 1 <= n:
            lhs = coboundary(X, conv.cup(X, a, i, b, j), i + j)
            rhs = vec_add(conv.cup(X, coboundary(X, a, i), i + 1, b, j),
                          conv.cup(X, a, i, coboundary(X, b, j), j + 1), _sgn(i))
            if _clean(lhs) != _clean(rhs):
                failed.append("leibniz")
        m = rng.randint(0, n)
        x = rand(m)
        c = rand(m)
        if field(aug(conv.cap(c, m, x))) != field(evaluate(c, x)):
            failed.append("augmentation")
        if _clean(conv.cap(one, 0, x)) != _clean(x):
            failed.append("unit")
        if i + j <= m:
            lhs = conv.cap(conv.cup(X, a, i, b, j), i + j, x)
            rhs = conv.cap(a, i, conv.cap(b, j, x))
            if _clean(lhs) != _clean(rhs):
                failed.append("associativity")
    return sorted(set(failed))


def _clean(d):
    return {k: v for k, v in d.items() if v}


# --------------------------------------------------------------------------
# intersection cochains


@dataclass
class CohomologyDegree:
    dim: int
    representatives: List[dict]      # cocycle values on basis chains
    pairing: SparseMatrix            # [a][b] = rep_a(homology rep_b)
    pairing_inverse: Optional[SparseMatrix]


class ICochains:
    """Intersection cochains ``Hom(I^p S_*, F)`` with cohomology and lifts."""

    def __init__(self, C: IChainComplex, H: Optional[HomologyResult] = None):
        self.chains = C
        self.space = C.space
        self.field = C.field
        self.dim = C.dim
        self.homology = H if H is not None else homology(C)

    # -- coboundary ---------------------------------------------------------

    @cached_property
    def codifferentials(self) -> Dict[int, SparseMatrix]:
        """``delta[i]``: degree ``i`` cochains to degree ``i+1``."""
        D = self.chains.differentials
        out = {}
        for i in range(-1, self.dim + 1):
            Dn = D.get(i + 1)
            if Dn is None or i < 0:
                out[i] = SparseMatrix(self.chains.rank(i + 1) if i + 1 <= self.dim else 0,
                                      self.chains.rank(i) if i >= 0 else 0, self.field)
                continue
            out[i] = Dn.T.scale(self.field.sign(i + 1))
        return out

    def d(self, i: int, alpha: Mapping) -> dict:
        return self.codifferentials[i].apply(alpha)

    def check_d_squared(self) -> bool:
        cd = self.codifferentials
        return all((cd[i + 1] @ cd[i]).is_zero() for i in range(0, self.dim))

    # -- cohomology ---------------------------------------------------------

    @cached_property
    def cohomology(self) -> Dict[int, CohomologyDegree]:
        out = {}
        F = self.field
        for i in range(self.dim + 1):
            Z = kernel_basis(self.codifferentials[i]) if self.chains.rank(i) else []
            B = self.codifferentials[i - 1].columns() if i > 0 else []
            red = IncrementalBasis()
            for b in B:
                red.add(b)
            reps = [z for z in Z if red.add(z)]
            hreps = self.homology.degrees[i].representatives
            P = SparseMatrix.from_columns(len(reps), F,
                                          [{a: _dot(z, h) for a, z in enumerate(reps)} for h in hreps])
            try:
                Pinv = inverse(P) if P.nrows == P.ncols else None
            except ValueError:
                Pinv = None
            out[i] = CohomologyDegree(len(reps), reps, P, Pinv)
        return out

    @property
    def dims(self) -> List[int]:
        return [self.cohomology[i].dim for i in range(self.dim + 1)]

    def project(self, i: int, z: Mapping) -> dict:
        """Cohomology coordinates of a cocycle via the evaluation pairing."""
        cd = self.cohomology[i]
        e = {b: _dot(z, h) for b, h in enumerate(self.homology.degrees[i].representatives)}
        # z(h_b) = sum_a c_a P[a][b]  =>  c = P^{-T} e
        return cd.pairing_inverse.T.apply(_clean(e))

    def is_cocycle(self, i: int, z: Mapping) -> bool:
        return not self.d(i, z)

    # -- lifting and restriction ---------------------------------------------

    def lift(self, i: int, alpha: Mapping) -> Cochain:
        """Extension by zero: the value on basis chain ``k`` goes to its free simplex."""
        d = self.chains.degrees[i]
        return {d.allowable[d.free[k]]: x for k, x in alpha.items() if x}

    def restrict(self, i: int, cochain: Mapping) -> dict:
        d = self.chains.degrees[i]
        out = {}
        for k, b in enumerate(d.basis):
            v = 0
            for c, x in b.items():
                a = cochain.get(d.allowable[c])
                if a:
                    v = v + a * x
            if v:
                out[k] = v
        return out

    def annihilator(self, i: int) -> List[Cochain]:
        """Ordinary cochains vanishing on every intersection chain of degree ``i``."""
        d = self.chains.degrees[i]
        free = set(d.free)
        out = []
        one = self.field.one
        for s in self.space.simplices_of_dim(i):
            c = d.col.get(s)
            if c is None:
                out.append({s: one})
            elif c not in free:
                phi = {s: one}
                for k, b in enumerate(d.basis):
                    x = b.get(c)
                    if x:
                        phi[d.allowable[d.free[k]]] = -x
                out.append(phi)
        return out

    def evaluate(self, i: int, alpha: Mapping, chain: Mapping):
        """Intersection cochain applied to an intersection chain."""
        coords = self.chains.coordinates(i, chain)
        if coords is None:
            raise ValueError("chain is not a degree-%d intersection chain" % i)
        return _dot(alpha, coords)


def _dot(u: Mapping, v: Mapping):
    total = 0
    for k, x in u.items():
        y = v.get(k)
        if y:
            total = total + x * y
    return total


# --------------------------------------------------------------------------
# evaluation maps


def uct_iso(K: ICochains, i: int) -> SparseMatrix:
    """Matrix of cohomology -> Hom(homology, F); rows are cohomology classes."""
    return K.cohomology[i].pairing


def kappa(K: ICochains, i: int) -> SparseMatrix:
    """``kappa(x)(alpha) = (-1)^i alpha(x)``; column ``b`` is ``kappa(h_b)``."""
    return K.cohomology[i].pairing.scale(K.field.sign(i))


def kappa_prime(K: ICochains, i: int) -> SparseMatrix:
    """``kappa'(alpha)(x) = alpha(x)``; row ``a`` is ``kappa'(z_a)``."""
    return K.cohomology[i].pairing


def double_dual_value(x: Mapping, alpha: Mapping, degree: int, field: Field):
    """``f(x)(alpha) = (-1)^|alpha| alpha(x)`` for chain and cochain coordinates."""
    return field.sign(degree) * _dot(alpha, x)


def double_dual_check(K: ICochains, rng, samples: int = 1000) -> Tuple[int, int]:
    """Check ``f(dx) = d(f(x))`` on random (x, alpha) pairs.

    The differential of ``f(x)`` in the double dual is
    ``(d f(x))(alpha) = -(-1)^|f(x)| f(x)(d alpha)`` with ``|f(x)| = -|x|``.
    Returns ``(passed, tried)``.
    """
    F = K.field
    C = K.chains
    D = C.differentials
    degrees = [i for i in range(1, C.dim + 1) if C.rank(i) and C.rank(i - 1)]
    passed = tried = 0
    if not degrees:
        return 0, 0
    for _ in range(samples):
        i = rng.choice(degrees)
        x = {k: F.random(rng, 3) for k in range(C.rank(i)) if rng.random() < 0.6}
        x = _clean(x)
        alpha = _clean({k: F.random(rng, 3) for k in range(C.rank(i - 1))})
        lhs = double_dual_value(D[i].apply(x), alpha, i - 1, F)
        dalpha = K.d(i - 1, alpha)
        rhs = -F.sign(-i) * double_dual_value(x, dalpha, i, F)
        tried += 1
        passed += F(lhs) == F(rhs)
    return passed, tried


def double_dual_homology_matrix(K: ICochains, i: int) -> SparseMatrix:
    """Matrix of ``H_i -> Hom(H^i, F)`` induced by ``f``: entry [a][b] = f(h_b)(z_a)."""
    return K.cohomology[i].pairing.scale(K.field.sign(i))


# --------------------------------------------------------------------------
# fundamental class and duality


class NotOrientable(ValueError):
    pass


class AllowabilityRepairFailed(RuntimeError):
    pass


def fundamental_cycle(X: StratifiedComplex, field: Field) -> Chain:
    signs = X.find_fundamental_cycle(field)
    if signs is None:
        raise NotOrientable("%s is not orientable over %s" % (X.name, field))
    return signs


@dataclass
class DualityDegree:
    """Duality in one degree on one triangulation."""

    degree: int
    certified: bool
    reason: str = ""
    matrix: Optional[SparseMatrix] = None        # columns: images of cohomology basis
    lifts: List[Cochain] = field(default_factory=list)
    kernel_lifts: List[Cochain] = field(default_factory=list)   # good lifts of zero classes
    good_space_dim: int = 0


class DualitySystem:
    """Everything needed for duality on one triangulation and perversity.

    ``p`` acts on cochains, ``Dp`` on the output chains.
    """

    def __init__(self, X: StratifiedComplex, p: Perversity, field: Field, strict: bool = False):
        self.strict = strict
        self.space = X
        self.field = field
        self.p = p
        self.q = p.dual()
        self.n = X.dim
        self.gamma = fundamental_cycle(X, field)
        self.Cp = build(X, self.p, field)
        self.Cq = build(X, self.q, field)
        self.Kp = ICochains(self.Cp)
        self.Kq = ICochains(self.Cq)
        self._degrees: Dict[int, DualityDegree] = {}
        self._cap_cache: Dict[int, dict] = {}

    def cap_gamma(self, alpha: Mapping, i: int) -> Chain:
        """``alpha n Gamma`` through a back-face index (same result as :func:`cap`)."""
        index = self._cap_index(i)
        out: Chain = {}
        for s, a in alpha.items():
            for f, c in index.get(s, ()):
                v = out.get(f, 0) + a * c
                if v:
                    out[f] = v
                else:
                    out.pop(f, None)
        return out

    def _cap_index(self, i: int):
        if i not in self._cap_cache:
            n = self.n
            sign = self.field.sign(i * (n - i))
            index: Dict[Simplex, list] = {}
            for s, c in self.gamma.items():
                index.setdefault(s[n - i:], []).append((s[:n - i + 1], sign * c))
            self._cap_cache[i] = index
        return self._cap_cache[i]

    def homology_class(self, chain: Mapping, j: int) -> Optional[dict]:
        """Homology coordinates of a Dp cycle (None if not an intersection cycle)."""
        return self.Kq.homology.project_chain(j, chain)

    def cohomology_class(self, alpha: Mapping, i: int) -> dict:
        """Cohomology coordinates of an ordinary cochain restricting to a cocycle."""
        z = self.Kp.restrict(i, alpha)
        if not self.Kp.is_cocycle(i, z):
            raise ValueError("restriction is not a cocycle")
        return self.Kp.project(i, z)

    def degree(self, i: int) -> DualityDegree:
        if i not in self._degrees:
            self._degrees[i] = self._solve(i)
        return self._degrees[i]

    def _solve(self, i: int) -> DualityDegree:
        """Search the good lifts of every cohomology class in degree ``i``.

        Unknowns: coordinates ``y`` on a cocycle basis and ``t`` on the
        annihilator.  Constraints: the capped chain vanishes on simplices that
        are singular or not Dp-allowable, and has zero boundary.
        """
        X, F, n = self.space, self.field, self.n
        j = n - i
        Kp = self.Kp
        hdim = Kp.cohomology[i].dim
        cyc = kernel_basis(Kp.codifferentials[i]) if self.Cp.rank(i) else []
        ann = Kp.annihilator(i)
        if self.strict:
            ann = [phi for phi in ann if all(s in Kp.chains.degrees[i].col for s in phi)]
        generators = [Kp.lift(i, z) for z in cyc] + ann
        allowed = set(self.Cq.degrees[j].col) if j >= 0 else set()
        jsimp = X.simplices_of_dim(j)
        jrow = {s: r for r, s in enumerate(s for s in jsimp if s not in allowed)}
        brow = {s: r for r, s in enumerate(X.simplices_of_dim(j - 1))} if j > 0 else {}
        nrow = len(jrow)
        cols = []
        images = []
        for g in generators:
            ch = self.cap_gamma(g, i)
            images.append(ch)
            col = {}
            for s, x in ch.items():
                r = jrow.get(s)
                if r is not None:
                    col[r] = x
            if j > 0:
                for s, x in self.Cq.boundary(ch).items():
                    col[nrow + brow[s]] = x
            cols.append(col)
        M = SparseMatrix.from_columns(nrow + len(brow), F, cols)
        G = kernel_basis(M)
        ny = len(cyc)
        # linear read-outs: cohomology coords from y, homology coords from the chain
        rows_c = []
        rows_h = []
        for g in G:
            z = {}
            for k, x in g.items():
                if k < ny:
                    z = vec_add(z, cyc[k], x)
            rows_c.append(Kp.project(i, z) if hdim else {})
            ch = {}
            for k, x in g.items():
                ch = vec_add(ch, images[k], x)
            h = self.homology_class(ch, j)
            if h is None:
                raise AssertionError("good lift produced a non-intersection chain")
            rows_h.append(h)
        Cmat = SparseMatrix.from_columns(hdim, F, rows_c)
        hq = self.Kq.homology.degrees[j].dim
        Hmat = SparseMatrix.from_columns(hq, F, rows_h)
        rc = rank(Cmat)
        out = DualityDegree(i, False, good_space_dim=len(G))
        if rc < hdim:
            out.reason = "coverage: good lifts reach %d of %d classes" % (rc, hdim)
            return out
        if rank(Cmat.vstack(Hmat)) != rc:
            out.reason = "well-definedness: a zero class caps to a nonzero homology class"
            return out
        sols = solve_many(Cmat, [{a: F.one} for a in range(hdim)])
        sign = F.sign(i * n)

        def lift_of(u):
            coeff = {}
            for gk, x in u.items():
                coeff = vec_add(coeff, G[gk], x)
            alpha = {}
            for k, x in coeff.items():
                alpha = vec_add(alpha, generators[k], x)
            return alpha

        lifts = [lift_of(u) for u in sols]
        matrix = SparseMatrix.from_columns(hq, F, [Hmat.apply(u) for u in sols]).scale(sign)
        zero_dirs = kernel_basis(Cmat)
        out.matrix = matrix
        if hdim != hq or rank(matrix) < hdim:
            out.reason = "degenerate: capped classes span %d of %d dual classes" % (rank(matrix), hq)
            return out
        out.certified = True
        out.matrix = matrix
        out.lifts = lifts
        out.kernel_lifts = [lift_of(u) for u in zero_dirs]
        return out

    def duality_map(self, i: int, alpha_class: Mapping) -> dict:
        """Homology coordinates of ``(-1)^(in) alpha n Gamma`` for a cohomology class."""
        dd = self.degree(i)
        if not dd.certified:
            raise AllowabilityRepairFailed("allowability repair failed in degree %d: %s" % (i, dd.reason))
        return dd.matrix.apply(alpha_class)

    def duality_chain(self, i: int, a: int) -> Chain:
        """Chain-level ``(-1)^(in) alpha_a n Gamma`` using the certified lift."""
        dd = self.degree(i)
        ch = self.cap_gamma(dd.lifts[a], i)
        if (i * self.n) % 2:
            ch = {s: -x for s, x in ch.items()}
        return ch


@dataclass
class DualityReport:
    space: str
    perversity: str
    degree: int
    rank_equal: bool
    certified: bool
    subdivisions: int
    reason: str
    matrix: Optional[SparseMatrix]
    system: Optional[DualitySystem] = None


#: subdivisions whose top-simplex count would exceed this are not attempted
SUBDIVISION_BUDGET = 5000


def duality_map(X: StratifiedComplex, p: Perversity, i: int, field: Field,
                subdiv_limit: int = 2, budget: int = SUBDIVISION_BUDGET) -> DualityReport:
    """Duality in degree ``i`` with subdivision retries.

    On failure the report is uncertified but still records whether the
    cohomology and dual homology dimensions agree.  A retry whose
    subdivision would have more than ``budget`` top simplices is skipped.
    """
    from .complex import barycentric_subdivide
    from .perversity import Perversity as _P

    Y, pY = X, p
    reason = ""
    rank_equal = None
    for k in range(subdiv_limit + 1):
        sysm = DualitySystem(Y, pY, field)
        if rank_equal is None:
            rank_equal = sysm.Kp.cohomology[i].dim == sysm.Kq.homology.degrees[X.dim - i].dim
        dd = sysm.degree(i)
        if dd.certified:
            return DualityReport(X.name, p.label, i, rank_equal, True, k, "", dd.matrix, sysm)
        reason = dd.reason
        if k == subdiv_limit:
            break

        if len(Y.simplices_of_dim(Y.dim)) * math.factorial(Y.dim + 1) > budget:
            reason += "; further subdivision exceeds the budget of %d simplices" % budget
            return DualityReport(X.name, p.label, i, rank_equal, False, k,
                                 "allowability repair failed: " + reason, None, None)
        Z = barycentric_subdivide(Y)
        pY = _P(Z, transfer_perversity(Y, Z, pY), p.name)
        Y = Z
    return DualityReport(X.name, p.label, i, rank_equal, False, subdiv_limit,
                         "allowability repair failed: " + reason, None, None)


def transfer_perversity(X: StratifiedComplex, Y: StratifiedComplex, p: Perversity) -> Dict[int, int]:
    """Carry a perversity to the barycentric subdivision ``Y`` of ``X``.

    The barycenter of a simplex inherits its stratum, so a stratum of ``Y`` is
    matched through the original simplex of its first member.
    """
    order = sorted(X.levels, key=lambda s: (len(s), s))
    vals = {}
    for st in Y.singular_strata:
        flag = st.simplices[0]
        orig = order[flag[-1]]
        vals[st.index] = p(X.stratum_of[orig])
    return vals


# --------------------------------------------------------------------------
# pairings


@dataclass
class PairingResult:
    degree: int
    certified: bool
    reason: str = ""
    nu: Optional[List[list]] = None        # nu[a][b] = nu(alpha_a)(beta_b)
    kappa_pd: Optional[List[list]] = None  # kappa(PD alpha_a)(beta_b)
    perturbations: int = 0


def nu_value(X: StratifiedComplex, gamma: Mapping, alpha: Mapping, i: int, beta: Mapping, j: int, field: Field):
    """``(-1)^(ij+n) aug((beta u alpha) n Gamma)`` from explicit lifts."""
    n = X.dim
    return field.sign(i * j + n) * field(aug(cap(cup(X, beta, j, alpha, i), i + j, gamma)))


def nu_pairing(sysm: DualitySystem, i: int, check_perturbations: bool = True) -> PairingResult:
    """The pairing of degree ``i`` (perversity p) against degree ``n-i`` (perversity Dp).

    Lifts for ``alpha`` come from the duality certificate; lifts for ``beta``
    are extension by zero.  The certificate recomputes the pairing after
    moving either lift within its admissible family and demands no change.
    """
    X, F, n = sysm.space, sysm.field, sysm.n
    j = n - i
    dd = sysm.degree(i)
    if not dd.certified:
        return PairingResult(i, False, "allowability repair failed: " + dd.reason)
    Kq = sysm.Kq
    betas = [Kq.lift(j, z) for z in Kq.cohomology[j].representatives]
    nu = [[nu_value(X, sysm.gamma, a, i, b, j, F) for b in betas] for a in dd.lifts]
    kpd = []
    for a in range(len(dd.lifts)):
        x = sysm.duality_chain(i, a)
        row = []
        for z in Kq.cohomology[j].representatives:
            row.append(F.sign(j) * F(Kq.evaluate(j, z, x)))
        kpd.append(row)
    res = PairingResult(i, True, nu=nu, kappa_pd=kpd)
    if check_perturbations:
        perturb_beta = Kq.annihilator(j)
        if j > 0:
            perturb_beta += [Kq.lift(j, Kq.d(j - 1, {k: F.one})) for k in range(Kq.chains.rank(j - 1))]
        count = 0
        for a in dd.lifts:
            for phi in perturb_beta:
                count += 1
                if nu_value(X, sysm.gamma, a, i, phi, j, F):
                    res.certified = False
                    res.reason = "pairing ill-defined for these lifts (beta perturbation)"
                    res.perturbations = count
                    return res
        for a in dd.kernel_lifts:
            for b in betas:
                count += 1
                if nu_value(X, sysm.gamma, a, i, b, j, F):
                    res.certified = False
                    res.reason = "pairing ill-defined for these lifts (alpha perturbation)"
                    res.perturbations = count
                    return res
        res.perturbations = count
    return res


def right_square(sysm: DualitySystem, i: int) -> Optional[Tuple[list, list]]:
    """Both sides of the evaluation square, as matrices over basis pairs.

    Left: ``(-1)^(in) kappa(alpha n Gamma)(beta)``.
    Right: the Hom dual of ``(-1)^((n-i)n) (. n Gamma)`` applied to
    ``kappa'(alpha)``.  Dualizing the degree ``-n`` map ``. n Gamma`` against a
    degree ``i`` functional costs the Koszul sign ``(-1)^(in)``, so the right
    side is ``(-1)^((n-i)n + in) kappa'(alpha)(beta n Gamma)``.
    Needs certified duality in degrees ``i`` (for p) and ``n-i`` (for Dp).
    """
    X, F, n = sysm.space, sysm.field, sysm.n
    j = n - i
    dd = sysm.degree(i)
    other = DualitySystem(X, sysm.q, F)
    de = other.degree(j)
    if not (dd.certified and de.certified):
        return None
    left, right = [], []
    for a, at in enumerate(dd.lifts):
        x = cap(at, i, sysm.gamma)
        lrow, rrow = [], []
        for b, bt in enumerate(de.lifts):
            zb = other.Kp.restrict(j, bt)
            lrow.append(F.sign(i * n) * F.sign(j) * F(other.Kp.evaluate(j, zb, x)))
            y = cap(bt, j, sysm.gamma)
            za = sysm.Kp.restrict(i, at)
            rrow.append(F.sign(j * n + i * n) * F(sysm.Kp.evaluate(i, za, y)))
        left.append(lrow)
        right.append(rrow)
    return left, right


# --------------------------------------------------------------------------
# products on manifolds (ordinary cohomology)


class ManifoldProducts:
    """Cup, duality and the transported product on a closed oriented manifold."""

    def __init__(self, X: StratifiedComplex, field: Field):
        if not X.is_trivially_stratified:
            raise ValueError("%s is not trivially stratified" % X.name)
        from .perversity import constant
        self.space = X
        self.field = field
        self.n = X.dim
        self.sys = DualitySystem(X, constant(X, 0, "zero"), field)
        self.K = self.sys.Kp

    def cohomology_basis(self, i: int) -> List[Cochain]:
        return [self.K.lift(i, z) for z in self.K.cohomology[i].representatives]

    def cup_class(self, a: Cochain, i: int, b: Cochain, j: int) -> dict:
        c = cup(self.space, a, i, b, j)
        return self.sys.cohomology_class(c, i + j)

    def cup_table(self, i: int, j: int) -> List[List[dict]]:
        A, B = self.cohomology_basis(i), self.cohomology_basis(j)
        return [[self.cup_class(a, i, b, j) for b in B] for a in A]

    def cap_matrix(self, i: int) -> SparseMatrix:
        """Unsigned ``alpha -> alpha n Gamma`` on cohomology bases."""
        cols = [self.sys.homology_class(cap(a, i, self.sys.gamma), self.n - i)
                for a in self.cohomology_basis(i)]
        return SparseMatrix.from_columns(self.sys.Kq.homology.degrees[self.n - i].dim, self.field, cols)

    def pd_matrix(self, i: int) -> SparseMatrix:
        return self.cap_matrix(i).scale(self.field.sign(i * self.n))

    def intersect(self, x: Mapping, xi: int, y: Mapping, yi: int) -> dict:
        """``x`` pitchfork ``y`` = ``(a u b) n Gamma`` where ``a n Gamma = x`` and ``b n Gamma = y``.

        Classes are homology coordinates in degrees ``xi`` and ``yi``.
        """
        n = self.n
        i, j = n - xi, n - yi
        a = self._uncap(x, i)
        b = self._uncap(y, j)
        c = cup(self.space, a, i, b, j)
        return self.sys.homology_class(cap(c, i + j, self.sys.gamma), n - i - j)

    def _uncap(self, x: Mapping, i: int) -> Cochain:
        M = self.cap_matrix(i)
        sol = solve_many(M, [x])[0]
        if sol is None:
            raise ValueError("class not in the image of capping")
        out: Cochain = {}
        for a, c in sol.items():
            out = vec_add(out, self.cohomology_basis(i)[a], c)
        return out
