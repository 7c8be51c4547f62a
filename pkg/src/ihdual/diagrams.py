"""Homology-level diagram checks over spaces and perversity grids.

Every check returns a :class:`DiagramReport`.  A per-degree status is one of
``exact-commute``, ``commute-up-to-sign(...)``, ``defect-witness`` or
``skipped: <reason>``.  Reports are plain data so they can cross process
boundaries and be merged by sorted key.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .complex import StratifiedComplex, barycentric_subdivide, cone
from .exactfield import QQ, Field, SparseMatrix, parse_field
from .ichains import apex_value, build, cone_formula_oracle, homology, ih_dims
from .perversity import Perversity, constant
from .products import (DualitySystem, ICochains, ManifoldProducts, NotOrientable, duality_map,
                       nu_pairing, transfer_perversity, unit_cochain)
from . import signcalc

EXACT = "exact-commute"
WITNESS = "defect-witness"


def up_to_sign(signs) -> str:
    return "commute-up-to-sign(%s)" % ",".join(signs)


def skipped(reason: str) -> str:
    return "skipped: " + reason


@dataclass
class DiagramReport:
    space: str
    perversities: Tuple[str, ...]
    diagram: str
    status: Dict[str, str] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)
    informational: bool = False

    @property
    def key(self):
        return (self.diagram, self.space, self.perversities)

    @property
    def passed(self) -> bool:
        """No witness among the degrees (informational reports always pass)."""
        return self.informational or all(s != WITNESS for s in self.status.values())

    @property
    def exercised(self) -> int:
        return sum(1 for s in self.status.values() if not s.startswith("skipped"))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["perversities"] = list(self.perversities)
        d["passed"] = self.passed
        return d

    def tsv_rows(self) -> List[str]:
        head = "%s\t%s\t%s" % (self.diagram, self.space, ",".join(self.perversities))
        if not self.status:
            return [head + "\t-\t" + ("pass" if self.passed else "FAIL")]
        return ["%s\t%s\t%s" % (head, k, v) for k, v in self.status.items()]


def _orientable(X: StratifiedComplex, field: Field) -> bool:
    if X.boundary or not X.is_connected():
        return False
    return X.find_fundamental_cycle(field) is not None


# --------------------------------------------------------------------------
# duality ranks


def check_duality_ranks(X: StratifiedComplex, p: Perversity, field: Field = QQ) -> DiagramReport:
    """``dim I_p H^i = dim I^p H_i = dim I^Dp H_(n-i)`` in every degree."""
    q = p.dual()
    rep = DiagramReport(X.name, (p.label, q.label), "duality-ranks")
    if X.boundary:
        rep.status["*"] = skipped("not a closed pseudomanifold")
        return rep
    if not _orientable(X, field):
        rep.status["*"] = skipped("not oriented over %s" % field)
        return rep
    n = X.dim
    Cp = build(X, p, field)
    hp = homology(Cp).dims
    cp = ICochains(Cp).dims
    hq = ih_dims(X, q, field)
    rep.details = {"IH_p": hp, "IH^p": cp, "IH_Dp": hq}
    for i in range(n + 1):
        ok = cp[i] == hp[i] == hq[n - i]
        rep.status[str(i)] = EXACT if ok else WITNESS
    return rep


# --------------------------------------------------------------------------
# triangle I


def check_triangle_I(X: StratifiedComplex, p: Perversity, field: Field = QQ,
                     subdiv_limit: int = 2, degrees: Optional[Sequence[int]] = None) -> DiagramReport:
    """``nu(alpha)(beta) = kappa(PD alpha)(beta)`` on all basis pairs."""
    rep = DiagramReport(X.name, (p.label, p.dual().label), "triangle-I")
    if not _orientable(X, field):
        rep.status["*"] = skipped("not a closed oriented pseudomanifold over %s" % field)
        return rep
    rep.informational = not X.is_trivially_stratified and _non_normal(X, p, field)
    for i in (range(X.dim + 1) if degrees is None else degrees):
        dm = duality_map(X, p, i, field, subdiv_limit)
        if not dm.certified:
            rep.status[str(i)] = skipped(dm.reason)
            continue
        pr = nu_pairing(dm.system, i)
        if not pr.certified:
            rep.status[str(i)] = skipped(pr.reason)
            continue
        rep.details[str(i)] = {"subdivisions": dm.subdivisions, "perturbations": pr.perturbations,
                               "nu": [[field.format(x) for x in row] for row in pr.nu]}
        rep.status[str(i)] = EXACT if pr.nu == pr.kappa_pd else WITNESS
    return rep


def _non_normal(X: StratifiedComplex, p: Perversity, field: Field) -> bool:
    """True when degree-zero intersection homology is not one dimensional."""
    return ih_dims(X, p, field)[0] != 1


# --------------------------------------------------------------------------
# cube back face


def manifold_product_system(X: StratifiedComplex, field: Field = QQ):
    """Cohomology with cup as a :class:`signcalc.ProductSystem`, transported by PD.

    ``A^i = H^i``, ``B^(i-n) = H_(n-i)`` and ``f = PD`` of degree ``-n``.
    """
    MP = ManifoldProducts(X, field)
    n = X.dim
    dims = {i: MP.K.cohomology[i].dim for i in range(n + 1)}
    table = {}
    for i in range(n + 1):
        for j in range(n + 1 - i):
            if dims[i] and dims[j]:
                table[(i, j)] = MP.cup_table(i, j)
    unit = signcalc.Elem.make(0, MP.sys.cohomology_class(unit_cochain(X, field), 0))
    f_mats = {i: MP.pd_matrix(i) for i in range(n + 1)}
    dims = {i: d for i, d in dims.items() if d}
    f_mats = {i: f_mats[i] for i in dims}
    S = signcalc.system_from_tables(field, dims, table, unit, f_mats, -n)
    return MP, S


def check_cube_backface(X: StratifiedComplex, field: Field = QQ) -> DiagramReport:
    """Cup against the intersection product carried across by duality.

    The intersection product is ``x . y = (a u b) n Gamma`` where
    ``a n Gamma = x`` and ``b n Gamma = y``.  The observed sign ``s(i, j)``
    satisfies ``PD(alpha u beta) = s * ((. o (PD x PD))(alpha x beta))`` with
    the Koszul sign on ``PD x PD``.  It must be constant over basis pairs and
    equal the sign that signcalc measures for the bullet product with
    ``f = PD``, and that closed form too.
    """
    rep = DiagramReport(X.name, ("zero",), "cube-backface")
    if not X.is_trivially_stratified or not _orientable(X, field):
        rep.status["*"] = skipped("cube back face is checked on closed oriented manifolds")
        return rep
    MP, S = manifold_product_system(X, field)
    n = X.dim
    N = -n
    observed: Dict[Tuple[int, int], int] = {}
    same_as_bullet = True
    for i in S.A.degrees:
        for j in S.A.degrees:
            if i + j > n:
                continue
            for a in S.A.basis(i):
                for b in S.A.basis(j):
                    x, y = S.f(a), S.f(b)
                    geo = signcalc.Elem.make(x.deg + y.deg - N,
                                             MP.intersect(x.coords, -x.deg, y.coords, -y.deg))
                    if not geo.same(S.bullet(x, y)):
                        same_as_bullet = False
                    lhs = S.f(S.P(a, b))
                    rhs = geo.scale(field.sign(N * i))
                    signcalc._merge(observed, (i, j), signcalc._ratio(lhs, rhs))
    measured = signcalc.square_defects(S, "bullet")
    rep.details = {"pitchfork_is_bullet": same_as_bullet}
    for (i, j), s in sorted(observed.items()):
        pred = signcalc.predicted_square_sign("bullet", N, i)
        ok = same_as_bullet and s != 0 and s == measured.get((i, j)) == pred
        rep.details["%d,%d" % (i, j)] = {"observed": s, "signcalc": measured.get((i, j)), "closed_form": pred}
        if not ok:
            rep.status["%d,%d" % (i, j)] = WITNESS
        else:
            rep.status["%d,%d" % (i, j)] = EXACT if s == 1 else up_to_sign([str(s)])
    return rep


# --------------------------------------------------------------------------
# cone formula


def check_cone_formula(L: StratifiedComplex, apex_values: Sequence[int], field: Field = QQ) -> DiagramReport:
    """Cone homology against the truncation oracle for each apex value.

    Link strata keep the zero perversity.
    """
    cL = cone(L)
    rep = DiagramReport(cL.name, tuple("apex=%d" % v for v in apex_values), "cone-formula")
    for v in apex_values:
        vals = {st.index: 0 for st in cL.singular_strata}
        vals[cL.stratum_of[(0,)]] = v
        p = Perversity(cL, vals, "apex%d" % v)
        got = ih_dims(cL, p, field)
        want = cone_formula_oracle(L, p, field, cL)
        rep.details["apex=%d" % v] = {"computed": got, "oracle": want}
        rep.status["apex=%d" % v] = EXACT if got == want else WITNESS
    return rep


# --------------------------------------------------------------------------
# subdivision stability


def check_subdivision(X: StratifiedComplex, p: Perversity, field: Field = QQ) -> DiagramReport:
    """IH dimensions before and after one barycentric subdivision."""
    rep = DiagramReport(X.name, (p.label,), "subdivision")
    Y = barycentric_subdivide(X)
    pY = Perversity(Y, transfer_perversity(X, Y, p), p.name)
    a, b = ih_dims(X, p, field), ih_dims(Y, pY, field)
    rep.details = {"before": a, "after": b}
    rep.informational = not X.is_flag_like()
    for i in range(X.dim + 1):
        rep.status[str(i)] = EXACT if a[i] == b[i] else WITNESS
    return rep


# --------------------------------------------------------------------------
# running many checks


@dataclass(frozen=True)
class Job:
    """A picklable description of one check."""

    diagram: str
    space: str
    perversity: str = ""
    field: str = "q"
    extra: Tuple = ()


def run_job(job: Job) -> DiagramReport:
    from .corpus import get_space, perversity_grid
    from .perversity import parse_perversity
    F = parse_field(job.field)
    if job.diagram == "cone-formula":
        from .corpus import cone_links
        return check_cone_formula(cone_links()[job.space], list(job.extra), F)
    X = get_space(job.space)
    if job.diagram == "cube-backface":
        return check_cube_backface(X, F)
    grid = {p.label: p for p in perversity_grid(X)}
    p = grid[job.perversity] if job.perversity in grid else parse_perversity(job.perversity, X)
    if job.diagram == "duality-ranks":
        return check_duality_ranks(X, p, F)
    if job.diagram == "triangle-I":
        return check_triangle_I(X, p, F, *job.extra)
    if job.diagram == "subdivision":
        return check_subdivision(X, p, F)
    raise ValueError("unknown diagram %r" % job.diagram)


def run_jobs(jobs: Sequence[Job], workers: int = 1) -> List[DiagramReport]:
    """Run jobs, in a process pool when ``workers > 1``; output sorted by key."""
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(run_job, jobs))
    else:
        reports = [run_job(j) for j in jobs]
    return sorted(reports, key=lambda r: r.key)


def reports_json(reports: Sequence[DiagramReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"


def reports_tsv(reports: Sequence[DiagramReport]) -> str:
    lines = ["diagram\tspace\tperversities\tdegree\tstatus"]
    for r in reports:
        lines += r.tsv_rows()
    return "\n".join(lines) + "\n"
