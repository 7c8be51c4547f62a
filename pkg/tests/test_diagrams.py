import random

from ihdual.corpus import MANIFOLDS, closed_spaces, cone_links, get_space, perversity_grid
from ihdual.diagrams import (EXACT, WITNESS, DiagramReport, Job, check_cone_formula,
                             check_cube_backface, check_duality_ranks, check_subdivision,
                             check_triangle_I, manifold_product_system, reports_json, reports_tsv,
                             run_jobs)
from ihdual.exactfield import GF, QQ
from ihdual.perversity import constant, gm_perversity
from ihdual import signcalc

# observed cube back face signs different from 1, by space and bidegree
NONTRIVIAL_CUBE = {"S1": {"1,0": -1}, "S3": {"3,0": -1}}


def test_report_status_logic():
    r = DiagramReport("X", ("zero",), "d", {"0": EXACT, "1": "skipped: why"})
    assert r.passed and r.exercised == 1
    r.status["2"] = WITNESS
    assert not r.passed
    r.informational = True
    assert r.passed
    assert r.tsv_rows()[0] == "d\tX\tzero\t0\texact-commute"


def test_duality_ranks_on_grid():
    for name, X in closed_spaces().items():
        F = GF(2) if name == "RP2" else QQ
        for p in perversity_grid(X):
            r = check_duality_ranks(X, p, F)
            assert r.passed and r.exercised == X.dim + 1, (name, p.label)
    r = check_duality_ranks(get_space("RP2"), constant(get_space("RP2"), 0), QQ)
    assert r.exercised == 0 and r.passed


def test_triangle_I_on_manifolds():
    for name in MANIFOLDS:
        X = get_space(name)
        r = check_triangle_I(X, constant(X, 0))
        assert set(r.status.values()) == {EXACT}, name


def test_triangle_I_rp2_over_f2():
    X = get_space("RP2")
    r = check_triangle_I(X, constant(X, 0), GF(2))
    assert set(r.status.values()) == {EXACT}
    assert check_triangle_I(X, constant(X, 0), QQ).exercised == 0


def test_cube_backface_signs():
    for name in MANIFOLDS:
        r = check_cube_backface(get_space(name))
        assert r.passed and r.details["pitchfork_is_bullet"], name
        odd = {k: v["observed"] for k, v in r.details.items()
               if isinstance(v, dict) and v["observed"] != 1}
        assert odd == NONTRIVIAL_CUBE.get(name, {}), name


def test_cube_left_and_middle_faces():
    # transporting cup by PD with Q' gives the (-1)^n defect uniformly
    for name in ("T2", "S3", "S1"):
        X = get_space(name)
        _, S = manifold_product_system(X)
        assert set(signcalc.square_defects(S, "Q'").values()) == {(-1) ** X.dim}
        assert set(signcalc.square_defects(S, "Q").values()) == {1}


def test_cube_skips_singular_spaces():
    r = check_cube_backface(get_space("ST2"))
    assert r.exercised == 0 and r.passed


def test_cone_formula_reports():
    for L in cone_links().values():
        r = check_cone_formula(L, range(-1, L.dim + 2))
        assert set(r.status.values()) == {EXACT}


def test_subdivision_reports():
    for X in closed_spaces().values():
        for p in perversity_grid(X)[:2]:
            r = check_subdivision(X, p)
            assert not r.informational and set(r.status.values()) == {EXACT}


def test_run_jobs_deterministic_across_workers():
    jobs = [Job("duality-ranks", "ST2", "zero"), Job("cube-backface", "T2"),
            Job("cone-formula", "S1", extra=(0, 1)), Job("triangle-I", "S2", "zero"),
            Job("subdivision", "S(S1+S1)", "rand0")]
    a = reports_json(run_jobs(jobs, workers=1))
    b = reports_json(run_jobs(list(reversed(jobs)), workers=3))
    assert a == b
    assert reports_tsv(run_jobs(jobs)) == reports_tsv(run_jobs(jobs))
