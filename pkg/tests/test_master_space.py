import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liequot.errors import ConfigurationError, DomainError, PreconditionError
from liequot.master_space import (
    EpsilonShift,
    SimplexParam,
    boundary_lp,
    boundary_nonvanishing_check,
    chamber_transport,
    master_weight_data,
    moment_shift,
    phi_map,
    rescale,
    rescale_identity_check,
    scale_bound,
)
from liequot.vgit import WeightConfig, fingerprint


def test_phi_examples():
    assert phi_map(1) == [[F(1, 2)], [F(-1, 2)]]
    assert phi_map(2) == [[F(1, 3), F(1, 3)], [F(-2, 3), F(1, 3)], [F(1, 3), F(-2, 3)]]


@pytest.mark.parametrize("r", range(1, 7))
def test_phi_columns_vanish(r):
    rows = phi_map(r)
    assert all(sum(row[j] for row in rows) == 0 for j in range(r))


def test_moment_shift_examples():
    eps = EpsilonShift((F(1, 10), F(1, 5)))
    assert moment_shift(SimplexParam.vertex(2, 0), eps) == eps.eps
    assert moment_shift(SimplexParam.vertex(2, 2), eps) == (F(1, 10), F(6, 5))
    eq = EpsilonShift.uniform(2, F(1, 10))
    assert moment_shift(SimplexParam.barycenter(2), eq) == (F(13, 30), F(13, 30))


def test_parameter_validation():
    with pytest.raises(DomainError):
        SimplexParam((F(1, 2), F(1, 3)))
    with pytest.raises(DomainError):
        SimplexParam((F(3, 2), F(-1, 2)))
    with pytest.raises(DomainError):
        EpsilonShift((F(1), F(0)))


def test_master_weights():
    data = master_weight_data(2, (F(1, 10), F(1, 10)))
    assert data.weights == [(0, 0), (-1, 0), (0, -1)]
    assert data.shifted_levels[1] == (F(11, 10), F(1, 10))


def test_rescale_examples():
    assert rescale((F(1, 4),)) == (F(1, 3),)
    assert rescale_identity_check((F(1, 4),))
    assert rescale_identity_check((0, 0))
    assert rescale_identity_check((F(1, 2), F(1, 4), F(1, 8)))
    with pytest.raises(PreconditionError):
        rescale_identity_check((F(1, 2), F(1, 2)))


@given(st.lists(st.integers(0, 50), min_size=1, max_size=4), st.integers(1, 200))
def test_rescale_identity_property(parts, extra):
    tot = sum(parts) + extra
    s = tuple(F(p, tot) for p in parts)
    assert rescale_identity_check(s)


def test_scale_bound_is_upper_bound():
    for r in range(1, 5):
        beta = scale_bound(r)
        assert float(beta) >= 1 / math.sqrt(2 * math.pi * r)
        assert float(beta) - 1 / math.sqrt(2 * math.pi * r) < 1e-5
    assert scale_bound(1) == F(99737, 250000)


def test_boundary_examples():
    assert boundary_nonvanishing_check(1, (F(1, 100),))
    assert not boundary_nonvanishing_check(1, (F(0),))
    assert boundary_nonvanishing_check(2, (F(1, 50), F(1, 50)))
    cert = boundary_lp(1, EpsilonShift((F(1, 100),)))
    assert cert.nonvanishing
    with pytest.raises(PreconditionError):
        boundary_nonvanishing_check(1, (F(1, 2),))


def test_transport_wall_at_half():
    eps = (F(1, 10),)
    cfg = WeightConfig(1, ((F(1, 2) + eps[0],), (F(-5),)))
    sd = chamber_transport(cfg, eps)
    walls0 = [w for w in sd.walls if w.dim == 0]
    assert [w.polytope.vertices for w in walls0] == [((F(1, 2),),)]
    assert len(sd.chambers) == 2


def test_transport_single_chamber_and_vertex_wall():
    eps = (F(1, 10),)
    far = WeightConfig(1, ((F(-5),), (F(-4),)))
    assert len(chamber_transport(far, eps).chambers) == 1
    at_vertex = WeightConfig(1, ((F(1) + eps[0],), (F(5),)))
    sd = chamber_transport(at_vertex, eps)
    assert any(w.polytope.vertices == ((F(1),),) for w in sd.walls)


def test_transport_fingerprints_agree_pointwise():
    eps = (F(1, 20), F(1, 20))
    cfg = WeightConfig(2, ((0, 0), (1, 0), (0, 1), (F(1, 2), F(1, 2))))
    omega = ((F(2), F(1)), (F(1), F(2)))
    sd = chamber_transport(cfg, eps, omega)
    rng = np.random.default_rng(3)
    for idx in range(len(sd.chambers)):
        t = sd.pulled.sample_chamber(idx, rng)
        assert sd.fingerprint_at(t) == fingerprint(cfg, sd.lam(t))
    with pytest.raises(ConfigurationError):
        chamber_transport(cfg, eps, ((1, 2), (2, 4)))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_moment_shift_in_open_chamber(r):
    rng = np.random.default_rng(r)
    eps = EpsilonShift.uniform(r, F(1, 100))
    for _ in range(1000):
        lam = moment_shift(SimplexParam.random(rng, r), eps)
        # fundamental-weight coordinates are the simple-coroot pairings
        assert all(x > 0 for x in lam)
