import random

import pytest

from ihdual.corpus import closed_spaces, get_space, perversity_grid
from ihdual.perversity import (constant, cup_condition, gm_perversity, gm_value, parse_perversity,
                               random_perversity)


def test_gm_values():
    assert gm_value("lower-middle", 3) == 0
    assert gm_value("upper-middle", 3) == 1
    assert gm_value("top", 2) == 0
    for k in range(2, 8):
        assert gm_value("lower-middle", k) + gm_value("upper-middle", k) == gm_value("top", k)


def test_dual_examples():
    X = get_space("ST2")
    z = gm_perversity("zero", X)
    assert z.dual() == gm_perversity("top", X)
    assert gm_perversity("lower-middle", X).dual() == gm_perversity("upper-middle", X)
    # codim 3: dual of 0 is 1
    assert set(z.dual().values.values()) == {1}


def test_dual_involution_and_order():
    rng = random.Random(3)
    for X in closed_spaces().values():
        for _ in range(20):
            p = random_perversity(X, rng)
            q = random_perversity(X, rng)
            assert p.dual().dual() == p
            assert p.is_complementary(p.dual())
            assert (p <= q) == (q.dual() <= p.dual())


def test_complementary_examples():
    X = get_space("ST2")
    assert gm_perversity("zero", X).is_complementary(gm_perversity("top", X))
    m = gm_perversity("lower-middle", X)
    assert not m.is_complementary(m)


def test_parse():
    X = get_space("ST2")
    assert parse_perversity("m", X) == gm_perversity("lower-middle", X)
    assert parse_perversity("const:2", X) == constant(X, 2)
    assert parse_perversity("D(zero)", X) == gm_perversity("top", X)
    idx = [st.index for st in X.singular_strata]
    p = parse_perversity('{"%d": 5, "%d": -1}' % tuple(idx), X)
    assert sorted(p.values.values()) == [-1, 5]
    with pytest.raises(ValueError):
        parse_perversity("nonsense", X)
    with pytest.raises(ValueError):
        parse_perversity('{"%d": 0}' % idx[0], X)


def test_cup_condition():
    X = get_space("ST2")
    z, t = gm_perversity("zero", X), gm_perversity("top", X)
    assert cup_condition(t, t, t)
    # D0 = t, and t >= t + t fails on codim-3 strata
    assert not cup_condition(z, z, z)


def test_grid_is_deduplicated_and_closed_under_duals():
    for X in closed_spaces().values():
        grid = perversity_grid(X)
        tables = [tuple(sorted(p.values.items())) for p in grid]
        assert len(tables) == len(set(tables))
        for p in grid:
            assert tuple(sorted(p.dual().values.items())) in tables
        assert perversity_grid(X) == grid
