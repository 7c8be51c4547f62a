import random
from fractions import Fraction

import pytest

from ihdual.corpus import MANIFOLDS, closed_spaces, get_space, perversity_grid
from ihdual.exactfield import GF, QQ, SparseMatrix, determinant, rank, vec_add
from ihdual.ichains import build, homology
from ihdual.perversity import constant, gm_perversity
from ihdual.products import (DEFAULT_CONVENTION, Convention, DualitySystem, ICochains, ManifoldProducts,
                             NotOrientable, all_conventions, aug, cap, chain_boundary, coboundary,
                             convention_violations, cup, double_dual_check,
                             double_dual_homology_matrix, double_dual_value, duality_map, evaluate,
                             fundamental_cycle, kappa, kappa_prime, nu_pairing, right_square,
                             uct_iso, unit_cochain)


def clean(d):
    return {k: v for k, v in d.items() if v}


def rand_cochain(X, i, rng, density=0.6):
    return clean({s: QQ.random(rng, 3) for s in X.simplices_of_dim(i) if rng.random() < density})


MANIFOLD_SPACES = [get_space(n) for n in MANIFOLDS]


def surviving(conventions):
    out = []
    for conv in conventions:
        rng = random.Random("solver")
        bad = set()
        for name in ("S2", "T2", "S3", "S1xS1"):
            bad |= set(convention_violations(conv, get_space(name), QQ, rng, trials=25))
        if not bad:
            out.append(conv)
    return out


def test_sign_solver_unique():
    assert len(all_conventions()) == 16
    assert surviving(all_conventions()) == [DEFAULT_CONVENTION]


def test_mirror_face_has_its_own_survivor():
    assert surviving(all_conventions(("front",))) == [Convention("0", "0", "front")]


def test_default_convention_is_the_implementation():
    rng = random.Random(1)
    X = get_space("T2")
    for _ in range(50):
        i, j = rng.randint(0, 2), rng.randint(0, 2)
        a, b = rand_cochain(X, i, rng), rand_cochain(X, j, rng)
        if i + j <= 2:
            assert clean(DEFAULT_CONVENTION.cup(X, a, i, b, j)) == cup(X, a, i, b, j)
        m = rng.randint(j, 2)
        x = rand_cochain(X, m, rng)
        assert clean(DEFAULT_CONVENTION.cap(b, j, x)) == cap(b, j, x)


def test_coboundary_sign():
    rng = random.Random(2)
    X = get_space("S3")
    for _ in range(100):
        i = rng.randint(0, 2)
        a = rand_cochain(X, i, rng)
        x = rand_cochain(X, i + 1, rng)
        assert evaluate(coboundary(X, a, i), x) == (-1) ** (i + 1) * evaluate(a, chain_boundary(x))


def _random_pair(rng):
    X = rng.choice(MANIFOLD_SPACES)
    n = X.dim
    i = rng.randint(0, n)
    j = rng.randint(0, n - i)
    return X, n, i, j


def test_cup_unit_500():
    rng = random.Random(10)
    for _ in range(500):
        X, n, i, _ = _random_pair(rng)
        a = rand_cochain(X, i, rng)
        one = unit_cochain(X, QQ)
        assert cup(X, one, 0, a, i) == a
        assert cup(X, a, i, one, 0) == a


def test_cup_leibniz_500():
    rng = random.Random(11)
    done = 0
    while done < 500:
        X, n, i, j = _random_pair(rng)
        if i + j + 1 > n:
            continue
        a, b = rand_cochain(X, i, rng), rand_cochain(X, j, rng)
        lhs = coboundary(X, cup(X, a, i, b, j), i + j)
        rhs = vec_add(cup(X, coboundary(X, a, i), i + 1, b, j),
                      cup(X, a, i, coboundary(X, b, j), j + 1), (-1) ** i)
        assert lhs == clean(rhs)
        done += 1


def test_cup_associative_500():
    rng = random.Random(12)
    for _ in range(500):
        X, n, i, j = _random_pair(rng)
        k = rng.randint(0, n - i - j)
        a, b, c = rand_cochain(X, i, rng), rand_cochain(X, j, rng), rand_cochain(X, k, rng)
        assert cup(X, cup(X, a, i, b, j), i + j, c, k) == cup(X, a, i, cup(X, b, j, c, k), j + k)


def test_cap_augmentation_1000():
    rng = random.Random(13)
    for _ in range(1000):
        X = rng.choice(MANIFOLD_SPACES)
        m = rng.randint(0, X.dim)
        a, x = rand_cochain(X, m, rng), rand_cochain(X, m, rng)
        assert aug(cap(a, m, x)) == evaluate(a, x)


def test_cap_unit():
    rng = random.Random(14)
    for _ in range(200):
        X = rng.choice(MANIFOLD_SPACES)
        m = rng.randint(0, X.dim)
        x = rand_cochain(X, m, rng)
        assert cap(unit_cochain(X, QQ), 0, x) == x


def test_cup_cap_associativity_500():
    rng = random.Random(15)
    spaces = [get_space("S2"), get_space("T2")]
    for _ in range(500):
        X = rng.choice(spaces)
        m = rng.randint(0, 2)
        i = rng.randint(0, m)
        j = rng.randint(0, m - i)
        a, b, x = rand_cochain(X, i, rng), rand_cochain(X, j, rng), rand_cochain(X, m, rng)
        assert cap(cup(X, a, i, b, j), i + j, x) == cap(a, i, cap(b, j, x))


def test_graded_commutativity_on_cohomology():
    for name in ("T2", "S1xS1", "S3", "S1"):
        MP = ManifoldProducts(get_space(name), QQ)
        n = MP.n
        for i in range(n + 1):
            for j in range(n + 1 - i):
                A, B = MP.cohomology_basis(i), MP.cohomology_basis(j)
                for a in A:
                    for b in B:
                        ab = MP.cup_class(a, i, b, j)
                        ba = MP.cup_class(b, j, a, i)
                        assert ab == clean({k: (-1) ** (i * j) * v for k, v in ba.items()})


def test_staircase_torus_cup_pairing():
    MP = ManifoldProducts(get_space("S1xS1"), QQ)
    table = MP.cup_table(1, 1)
    M = SparseMatrix.from_dense([[c.get(0, 0) for c in row] for row in table], QQ)
    assert determinant(M) in (1, -1)


def test_icochains_basics():
    rng = random.Random(16)
    for name, X in closed_spaces().items():
        for p in perversity_grid(X):
            K = ICochains(build(X, p))
            assert K.check_d_squared()
            assert K.dims == homology(K.chains).dims
    X = get_space("ST2")
    K = ICochains(build(X, gm_perversity("lower-middle", X)))
    for _ in range(1000):
        i = rng.randint(0, 3)
        alpha = clean({k: QQ.random(rng, 4) for k in range(K.chains.rank(i))})
        assert K.restrict(i, K.lift(i, alpha)) == alpha
    for i in range(4):
        for phi in K.annihilator(i):
            assert K.restrict(i, phi) == {}


def test_evaluation_maps_invertible():
    for name, X in closed_spaces().items():
        F = GF(2) if name == "RP2" else QQ
        for p in perversity_grid(X):
            K = ICochains(build(X, p, F))
            for i in range(X.dim + 1):
                for M in (uct_iso(K, i), kappa(K, i), kappa_prime(K, i), double_dual_homology_matrix(K, i)):
                    assert M.nrows == M.ncols
                    assert rank(M) == M.nrows
                assert kappa(K, i) == kappa_prime(K, i).scale(F.sign(i))


def test_kappa_sign_examples():
    X = get_space("S1")
    K = ICochains(build(X, constant(X, 0)))
    e = kappa(K, 1).to_dense()[0][0]
    assert e == -kappa_prime(K, 1).to_dense()[0][0]
    assert kappa(K, 0) == kappa_prime(K, 0)


def test_double_dual_chain_map_1000():
    rng = random.Random(17)
    total = 0
    for name in ("T2", "ST2", "S(S1+S1)", "S3"):
        X = get_space(name)
        for p in perversity_grid(X)[:2]:
            K = ICochains(build(X, p))
            passed, tried = double_dual_check(K, rng, 300)
            assert passed == tried
            total += tried
    assert total >= 1000
    assert double_dual_value({0: Fraction(1)}, {0: Fraction(1)}, 0, QQ) == 1


def test_rp2_is_not_rationally_orientable():
    X = get_space("RP2")
    with pytest.raises(NotOrientable):
        fundamental_cycle(X, QQ)
    assert set(fundamental_cycle(X, GF(2)).values()) == {GF(2)(1)}


def test_duality_examples():
    X = get_space("S2")
    S = DualitySystem(X, constant(X, 0), QQ)
    # i = 0 and alpha = 1 gives the fundamental cycle
    assert S.duality_chain(0, 0) in (S.gamma, {s: -v for s, v in S.gamma.items()})
    one = S.Kp.cohomology[0].representatives[0]
    lifted = S.Kp.lift(0, one)
    assert S.cap_gamma(unit_cochain(X, QQ), 0) == S.gamma
    d2 = S.degree(2)
    assert d2.certified and d2.matrix.shape == (1, 1) and rank(d2.matrix) == 1
    T = get_space("T2")
    ST = DualitySystem(T, constant(T, 0), QQ)
    M = ST.degree(1).matrix
    assert M.shape == (2, 2) and rank(M) == 2


def test_duality_full_rank_on_manifolds():
    for X in MANIFOLD_SPACES:
        S = DualitySystem(X, constant(X, 0), QQ)
        for i in range(X.dim + 1):
            d = S.degree(i)
            assert d.certified, (X.name, i, d.reason)
            assert rank(d.matrix) == d.matrix.nrows == d.matrix.ncols


def test_torus_intersection_form():
    for name in ("T2", "S1xS1"):
        X = get_space(name)
        S = DualitySystem(X, constant(X, 0), QQ)
        pr = nu_pairing(S, 1)
        assert pr.certified
        M = SparseMatrix.from_dense(pr.nu, QQ)
        assert determinant(M) in (1, -1)
        assert pr.nu == pr.kappa_pd
        # antisymmetric in degree 1 on a surface
        assert all(pr.nu[a][b] == -pr.nu[b][a] for a in range(2) for b in range(2))


def test_triangle_one_on_manifolds():
    for X in MANIFOLD_SPACES:
        S = DualitySystem(X, constant(X, 0), QQ)
        for i in range(X.dim + 1):
            pr = nu_pairing(S, i)
            assert pr.certified and pr.nu == pr.kappa_pd, (X.name, i)


def test_point_pairing():
    from ihdual.corpus import point
    X = point()
    S = DualitySystem(X, constant(X, 0), QQ)
    assert nu_pairing(S, 0).nu == [[1]]


def test_right_square_on_manifolds():
    for X in MANIFOLD_SPACES:
        S = DualitySystem(X, constant(X, 0), QQ)
        for i in range(X.dim + 1):
            left, right = right_square(S, i)
            assert left == right, (X.name, i)


def test_intersection_product_unit_and_associativity():
    for name in ("T2", "S1xS1", "S2", "S3"):
        X = get_space(name)
        MP = ManifoldProducts(X, QQ)
        n = X.dim
        gamma = MP.sys.homology_class(MP.sys.gamma, n)
        assert MP.intersect(gamma, n, gamma, n) == gamma
        H = MP.sys.Kq.homology
        classes = [(k, {a: QQ.one}) for k in range(n + 1) for a in range(H.degrees[k].dim)]
        for kx, x in classes:
            for ky, y in classes:
                for kz, z in classes:
                    if kx + ky + kz < 2 * n:
                        continue
                    xy = MP.intersect(x, kx, y, ky)
                    yz = MP.intersect(y, ky, z, kz)
                    left = MP.intersect(xy, kx + ky - n, z, kz)
                    right = MP.intersect(x, kx, yz, ky + kz - n)
                    assert left == right


def test_duality_report_with_subdivision():
    X = get_space("ST2")
    p = gm_perversity("lower-middle", X)
    r = duality_map(X, p, 3, QQ, subdiv_limit=0)
    assert not r.certified and r.rank_equal
    r = duality_map(X, p, 3, QQ, subdiv_limit=1)
    assert r.certified and r.subdivisions == 1
