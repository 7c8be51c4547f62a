"""The nine acceptance criteria, all exact.

Each test records one ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line, printed in the terminal summary, and then asserts.
"""

import random

from conftest import ACCEPTANCE_LINES
from ihdual.cli import main
from ihdual.complex import barycentric_subdivide, cone
from ihdual.corpus import MANIFOLDS, closed_spaces, cone_links, cones, get_space, perversity_grid
from ihdual.diagrams import (EXACT, Job, check_cone_formula, check_cube_backface,
                             check_duality_ranks, check_triangle_I, reports_json, run_jobs)
from ihdual.exactfield import GF, QQ, rank, vec_add
from ihdual.ichains import build, homology, ih_dims
from ihdual.perversity import Perversity, constant, random_perversity
from ihdual.products import (ICochains, aug, cap, coboundary, cup, double_dual_check,
                             double_dual_homology_matrix, evaluate, kappa, kappa_prime,
                             transfer_perversity, uct_iso, unit_cochain)
from ihdual.signcalc import LAWS, run_trials


def record(n, ok, text):
    ACCEPTANCE_LINES.append("%s criterion %d: %s" % ("PASS" if ok else "FAIL", n, text))
    print(ACCEPTANCE_LINES[-1])
    assert ok, text


def field_for(name):
    return GF(2) if name == "RP2" else QQ


def test_criterion_1_duality_ranks():
    bad, count = [], 0
    for name, X in closed_spaces().items():
        for p in perversity_grid(X):
            r = check_duality_ranks(X, p, field_for(name))
            count += r.exercised
            if not r.passed or r.exercised != X.dim + 1:
                bad.append((name, p.label))
    record(1, not bad, "duality ranks on %d (space, perversity, degree) cases; failures %s" % (count, bad))


def test_criterion_2_cone_formula():
    bad, count = [], 0
    for L in cone_links().values():
        r = check_cone_formula(L, range(-1, L.dim + 2))
        count += r.exercised
        bad += [(L.name, k) for k, s in r.status.items() if s != EXACT]
    record(2, not bad, "cone formula on %d (link, apex value) cases; failures %s" % (count, bad))


def _rand(X, i, rng):
    return {s: QQ.random(rng, 3) for s in X.simplices_of_dim(i) if rng.random() < 0.6}


def _clean(d):
    return {k: v for k, v in d.items() if v}


def test_criterion_3_manifold_degeneration():
    rng = random.Random("criterion-3")
    spaces = [get_space(n) for n in MANIFOLDS]
    bad = []
    for X in spaces:
        for p in [constant(X, 0), constant(X, 2), random_perversity(X, rng)]:
            if homology(build(X, p)).dims != X.simplicial_betti():
                bad.append(("homology", X.name, p.label))
    counts = dict.fromkeys(["unit", "leibniz", "associativity", "augmentation", "cup-cap"], 0)
    for _ in range(500):
        X = rng.choice(spaces)
        n = X.dim
        one = unit_cochain(X, QQ)
        i = rng.randint(0, n)
        j = rng.randint(0, n - i)
        k = rng.randint(0, n - i - j)
        m = rng.randint(i + j, n)
        a, b, c, x = _rand(X, i, rng), _rand(X, j, rng), _rand(X, k, rng), _rand(X, m, rng)
        ok = {
            "unit": cup(X, one, 0, a, i) == _clean(a) == cup(X, a, i, one, 0) and cap(one, 0, x) == _clean(x),
            "associativity": cup(X, cup(X, a, i, b, j), i + j, c, k) == cup(X, a, i, cup(X, b, j, c, k), j + k),
            "cup-cap": cap(cup(X, a, i, b, j), i + j, x) == cap(a, i, cap(b, j, x)),
        }
        am = _rand(X, m, rng)
        ok["augmentation"] = aug(cap(am, m, x)) == evaluate(am, x)
        # Leibniz needs room for one more degree
        i2 = rng.randint(0, n - 1)
        j2 = rng.randint(0, n - 1 - i2)
        a2, b2 = _rand(X, i2, rng), _rand(X, j2, rng)
        lhs = coboundary(X, cup(X, a2, i2, b2, j2), i2 + j2)
        rhs = vec_add(cup(X, coboundary(X, a2, i2), i2 + 1, b2, j2),
                      cup(X, a2, i2, coboundary(X, b2, j2), j2 + 1), (-1) ** i2)
        ok["leibniz"] = lhs == _clean(rhs)
        for law, good in ok.items():
            if good:
                counts[law] += 1
            else:
                bad.append((law, X.name))
    record(3, not bad and min(counts.values()) >= 500,
           "manifold IH equals simplicial homology; laws passed %s; failures %s"
           % (sorted(counts.items()), bad[:5]))


def test_criterion_4_triangle_I():
    exercised, skipped, bad = 0, [], []
    cases = [(get_space("S2"), [constant(get_space("S2"), 0)]),
             (get_space("T2"), [constant(get_space("T2"), 0)]),
             (get_space("ST2"), perversity_grid(get_space("ST2")))]
    for X, ps in cases:
        for p in ps:
            r = check_triangle_I(X, p)
            for deg, s in r.status.items():
                if s == EXACT:
                    exercised += 1
                elif s.startswith("skipped"):
                    skipped.append((X.name, p.label, deg))
                else:
                    bad.append((X.name, p.label, deg))
    ok = not bad and exercised > 6
    record(4, ok, "triangle I exact on %d certified degrees (uncertified, reported as skipped: %s); "
           "failures %s" % (exercised, skipped, bad))


def test_criterion_5_evaluation_maps():
    bad, count = [], 0
    for name, X in closed_spaces().items():
        F = field_for(name)
        for p in perversity_grid(X):
            K = ICochains(build(X, p, F))
            for i in range(X.dim + 1):
                for label, M in (("uct", uct_iso(K, i)), ("kappa", kappa(K, i)),
                                 ("kappa'", kappa_prime(K, i)), ("double-dual", double_dual_homology_matrix(K, i))):
                    count += 1
                    if M.nrows != M.ncols or rank(M) != M.nrows:
                        bad.append((name, p.label, i, label))
    rng = random.Random("criterion-5")
    passed = tried = 0
    for name in ("T2", "ST2", "S(S1+S1)", "S3"):
        X = get_space(name)
        for p in perversity_grid(X)[:2]:
            a, b = double_dual_check(ICochains(build(X, p)), rng, 300)
            passed += a
            tried += b
    ok = not bad and passed == tried >= 1000
    record(5, ok, "%d evaluation matrices invertible; double-dual chain-map identity %d/%d; failures %s"
           % (count, passed, tried, bad))


def test_criterion_6_sign_laws():
    failures = []
    for n in range(4):
        for law, (p, t) in run_trials(n, 1000).items():
            if p != t or t != 1000:
                failures.append((n, law, p, t))
    record(6, not failures, "%d laws x 1000 trials for n = 0..3; failures %s" % (len(LAWS), failures))


def test_criterion_7_cube_backface():
    bad, table = [], {}
    for name in MANIFOLDS:
        r = check_cube_backface(get_space(name))
        if not r.passed or not r.exercised:
            bad.append(name)
        table[name] = {k: v["observed"] for k, v in r.details.items() if isinstance(v, dict)}
    odd = {n: {k: s for k, s in t.items() if s != 1} for n, t in table.items()}
    odd = {n: t for n, t in odd.items() if t}
    record(7, not bad, "observed cube signs equal signcalc on %d manifolds; signs other than +1: %s; "
           "failures %s" % (len(table), odd, bad))


def test_criterion_8_subdivision():
    bad, count = [], 0
    spaces = list(closed_spaces().values()) + list(cones().values())
    for X in spaces:
        if not X.is_flag_like():
            continue
        Y = barycentric_subdivide(X)
        for p in perversity_grid(X):
            F = field_for(X.name)
            pY = Perversity(Y, transfer_perversity(X, Y, p), p.name)
            count += 1
            if ih_dims(Y, pY, F) != ih_dims(X, p, F):
                bad.append((X.name, p.label))
    record(8, not bad, "IH unchanged by subdivision on %d (space, perversity) pairs; failures %s"
           % (count, bad))


def _cli_bytes(tmp_path, argv, name):
    out = tmp_path / name
    main(argv + ["--out", str(out)])
    return out.read_bytes()


def test_criterion_9_determinism(tmp_path):
    commands = [
        ["dual-check", "ST2", "T2", "S(S1+S1)", "--format", "json"],
        ["ih", "ST2", "--format", "json", "--seed", "3"],
        ["signcalc-test", "--trials", "50", "--format", "json", "--seed", "7"],
        ["pairing", "T2", "--format", "json"],
        ["cone-check", "--format", "json"],
        ["subdivide", "ST2"],
    ]
    diffs = []
    for k, argv in enumerate(commands):
        if _cli_bytes(tmp_path, argv, "a%d" % k) != _cli_bytes(tmp_path, argv, "b%d" % k):
            diffs.append(argv[0])
    jobs = [Job("duality-ranks", "ST2", "rand0"), Job("triangle-I", "T2", "zero"),
            Job("cube-backface", "S3"), Job("subdivision", "S1", "zero")]
    if reports_json(run_jobs(jobs, 1)) != reports_json(run_jobs(jobs[::-1], 2)):
        diffs.append("run_jobs")
    record(9, not diffs, "%d report kinds byte-identical across two runs (and across worker counts); "
           "differences %s" % (len(commands) + 1, diffs))
