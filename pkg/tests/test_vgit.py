import math
from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from liequot.errors import CapabilityError, ConfigurationError, DomainError
from liequot.lie_core import build_root_system, weights_of_irrep
from liequot.vgit import (
    DirectionPool,
    WeightConfig,
    chambers,
    config_from_irrep,
    d_rho,
    direction_pool,
    finiteness_census,
    fingerprint,
    has_positive_dim_stabilizer,
    is_semistable,
    is_stable,
    lambda_fn,
    lattice_grid,
    as_region,
    m_function,
    m_sign,
    nonabelian_ss_probe,
    sh_set,
    stable_fingerprint,
    walls,
    walls_bruteforce,
)

NEG, ZERO, POS = -1, 0, 1
pm1 = WeightConfig(1, ((-1,), (1,)))
line3 = WeightConfig(1, ((0,), (1,), (2,)))
square = WeightConfig(2, ((0, 0), (1, 0), (0, 1), (1, 1)))


def test_config_validation():
    with pytest.raises(ConfigurationError):
        WeightConfig(1, ())
    with pytest.raises(ConfigurationError):
        WeightConfig(1, ((0,), (0,)))
    with pytest.raises(ConfigurationError):
        WeightConfig(2, ((0, 0),), (0,))
    with pytest.raises(ConfigurationError):
        WeightConfig(2, ((0, 0),), (), ((1, 2), (2, 1)))


def test_sh_set_examples():
    assert sh_set(line3, (1,)) == (1,)
    assert sh_set(line3, (0, 1, 2)) == (0, 2)
    cfg = WeightConfig(2, ((0, 0), (2, 0), (0, 2), (2, 2), (1, 1)))
    assert sh_set(cfg, (0, 1, 2, 3, 4)) == (0, 1, 2, 3)


def test_semistable_and_stable_examples():
    assert is_semistable(pm1, (0, 1), (-1,))
    assert is_semistable(pm1, (0, 1), (0,))
    assert not is_semistable(pm1, (0, 1), (2,))
    assert is_stable(pm1, (0, 1), (0,))
    assert not is_stable(pm1, (0, 1), (1,))
    on_line = WeightConfig(2, ((0, 0), (1, 1), (2, 2)))
    assert not is_stable(on_line, (0, 1, 2), (1, 1))
    assert is_semistable(on_line, (0, 1, 2), (1, 1))


def test_m_function_examples():
    m = m_function(pm1, (0, 1), (0,))
    assert m.sign == NEG and m.magnitude == pytest.approx(1)
    assert m_function(pm1, (0, 1), (1,)).sign == ZERO
    m = m_function(pm1, (0, 1), (2,))
    assert m.sign == POS and m.magnitude == pytest.approx(1)


def test_d_rho_examples():
    # lower end of the projected interval; sup over directions equals M
    assert d_rho(pm1, (0, 1), (0,), (1,)) == -1
    assert max(d_rho(pm1, (0, 1), (0,), (r,)) for r in (1, -1)) == -m_function(pm1, (0, 1), (0,)).magnitude
    assert d_rho(pm1, (0, 1), (2,), (-1,)) == 1
    assert max(d_rho(pm1, (0, 1), (2,), (r,)) for r in (1, -1)) == 1
    assert d_rho(pm1, (1,), (1,), (1,)) == 0
    with pytest.raises(DomainError):
        d_rho(pm1, (0, 1), (0,), (0,))


def test_lambda_examples():
    assert lambda_fn(pm1, (1,), (0,), (-1,)) == -1
    assert lambda_fn(pm1, (0, 1), (0,), (1,)) == 1
    assert min(lambda_fn(pm1, (0, 1), (0,), (w,)) for w in (1, -1)) == 1
    with pytest.raises(DomainError):
        lambda_fn(pm1, (0, 1), (0,), (0,))


def test_stabilizer_examples():
    assert has_positive_dim_stabilizer(square, (2,))
    assert has_positive_dim_stabilizer(square, (0, 3))
    assert not has_positive_dim_stabilizer(square, (0, 1, 2))


def _walls_as_sets(ws):
    return {frozenset(w.polytope.vertices) for w in ws}


def test_walls_examples():
    ws = walls(line3, [(0, 2)])
    assert _walls_as_sets(ws) == {frozenset({(F(k),)}) for k in range(3)}
    assert _walls_as_sets(walls(pm1, [(-1, 1)])) == {frozenset({(F(-1),)}), frozenset({(F(1),)})}
    ws = walls(square, [(0, 1), (0, 1)])
    assert sum(1 for w in ws if w.dim == 0) == 4
    assert sum(1 for w in ws if w.dim == 1) == 6  # four edges, two diagonals


def test_walls_against_bruteforce_examples():
    for cfg in (line3, pm1, square):
        assert _walls_as_sets(walls(cfg)) == set(walls_bruteforce(cfg))


def test_wall_samples_break_stability():
    for cfg in (line3, square):
        for w in walls(cfg):
            lam = w.sample()
            assert any(m_sign(cfg, s, lam) == ZERO for s in w.supports)
            assert fingerprint(cfg, lam) != stable_fingerprint(cfg, lam)


def test_chambers_examples():
    dec = chambers(line3, [(0, 2)])
    assert len(dec.chambers) == 2
    assert dec.chambers[0].fingerprint != dec.chambers[1].fingerprint
    assert dec.locate((F(1, 2),)) != dec.locate((F(3, 2),))
    assert dec.locate((1,)) == -1
    assert dec.locate((5,)) is None
    assert len(chambers(pm1, [(-1, 1)]).chambers) == 1
    with pytest.raises(CapabilityError):
        chambers(WeightConfig(4, ((0, 0, 0, 0),)))


def test_chamber_constancy_square():
    dec = chambers(square, [(-1, 2), (-1, 2)])
    rng = np.random.default_rng(1)
    for idx, ch in enumerate(dec.chambers):
        for _ in range(5):
            lam = dec.sample_chamber(idx, rng)
            fp = fingerprint(square, lam)
            assert fp == ch.fingerprint == stable_fingerprint(square, lam)
            assert dec.locate(lam) == idx


def test_census_examples():
    region = as_region(pm1, [(-2, 2)])
    assert finiteness_census(pm1, [(-2,), (0,), (2,)]).count == 2
    grid = lattice_grid(as_region(line3, [(0, 2)]), 201)
    assert finiteness_census(line3, grid).count <= 5
    single = WeightConfig(2, ((1, 1),))
    assert finiteness_census(single, [(1, 1), (0, 0), (3, 1)]).count == 2
    res = finiteness_census(line3, grid)
    assert res.unions_of_classes and res.within_power_bound
    assert region.contains((0,))


def test_probe_examples():
    rs = build_root_system("A", 1)
    adj = weights_of_irrep(rs, rs.from_omega([2]))
    cfg, frame = config_from_irrep(rs, adj)
    top = max(range(len(frame)), key=lambda i: frame[i])
    res = nonabelian_ss_probe(rs, adj, (top,), (0,))
    assert res.status == "certified-unstable"
    assert F(res.witness["lambda_value"]) < 0
    everything = tuple(range(len(frame)))
    assert nonabelian_ss_probe(rs, adj, everything, (0,), rng=np.random.default_rng(0)).status == "undetermined"
    torus = nonabelian_ss_probe(None, [((-1,), 1), ((1,), 1)], (0, 1), (0,))
    assert torus.status == "semistable"
    assert nonabelian_ss_probe(None, [((-1,), 1), ((1,), 1)], (0, 1), (2,)).status == "certified-unstable"


# -- property tests ---------------------------------------------------------

small = st.integers(-3, 3)


@st.composite
def configs(draw, max_rank=3, max_n=6):
    r = draw(st.integers(1, max_rank))
    pts = draw(st.lists(st.tuples(*[small] * r), min_size=1, max_size=max_n, unique=True))
    return WeightConfig(r, pts)


@st.composite
def config_and_level(draw):
    cfg = draw(configs())
    lam = tuple(F(draw(st.integers(-12, 12)), 4) for _ in range(cfg.rank))
    return cfg, lam


@given(config_and_level())
def test_oracle_equivalence(args):
    cfg, lam = args
    pool = DirectionPool(cfg, direction_pool(cfg))
    supports = cfg.supports()
    sweep = pool.sweep_all(lam, supports)
    for s, sw in zip(supports, sweep):
        m = m_function(cfg, s, lam)
        assert (m.sign <= 0) == is_semistable(cfg, s, lam)
        assert (m.sign < 0) == is_stable(cfg, s, lam)
        assert m.sign == m_sign(cfg, s, lam)
        # best d_rho over the pool has the sign of M
        assert sw == m.sign
        if m.sign == POS:
            assert m.magnitude > 0


@given(configs())
def test_sh_set_idempotent_and_same_hull(cfg):
    for s in cfg.supports():
        t = sh_set(cfg, s)
        assert sh_set(cfg, t) == t
        assert set(t) <= set(s)
        assert cfg.hull(t).canonical_key() == cfg.hull(s).canonical_key()


@given(configs(max_rank=2, max_n=5))
def test_walls_match_bruteforce(cfg):
    assert _walls_as_sets(walls(cfg)) == set(walls_bruteforce(cfg))


@given(config_and_level(), st.lists(st.integers(-12, 12), min_size=3, max_size=3))
def test_m_midpoint_convexity(args, other):
    cfg, lam = args
    lam2 = tuple(F(x, 4) for x in other[: cfg.rank])
    mid = tuple((a + b) / 2 for a, b in zip(lam, lam2))
    for s in cfg.supports():
        a, b, m = m_function(cfg, s, lam), m_function(cfg, s, lam2), m_function(cfg, s, mid)
        assert m.value <= (a.value + b.value) / 2 + 1e-9
        # exact: both semistable forces the midpoint semistable
        if a.sign <= 0 and b.sign <= 0:
            assert m.sign <= 0


def test_gram_changes_magnitude_not_sign():
    g = ((2, 1), (1, 2))
    a = WeightConfig(2, ((0, 0), (2, 0), (0, 2)))
    b = WeightConfig(2, ((0, 0), (2, 0), (0, 2)), (), g)
    lam = (F(3), F(3))
    s = (0, 1, 2)
    assert m_sign(a, s, lam) == m_sign(b, s, lam) == POS
    # distance to the edge x + y = 2 along the metric normal
    assert m_function(a, s, lam).magnitude == pytest.approx(4 / math.sqrt(2))
    assert m_function(a, s, lam).magnitude != pytest.approx(m_function(b, s, lam).magnitude)
