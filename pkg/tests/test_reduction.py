from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liequot.errors import DegeneratePointError, DomainError
from liequot.reduction import (
    CompatibleTriple,
    Subspace,
    exact_array,
    identity,
    max_abs,
    orthogonal_projection,
    projection_composition_check,
    random_compatible_triple,
    random_isotropic_subspace,
    random_subspace,
    reduce_point,
    stages_norm_check,
    standard_triple,
)

seeds = st.integers(0, 2**32 - 1)


def test_projection_trivial_targets():
    g = np.eye(4)
    assert np.array_equal(orthogonal_projection(g, Subspace.whole(4)), np.eye(4))
    assert np.array_equal(orthogonal_projection(g, Subspace.zero(4)), np.zeros((4, 4)))


def test_dependent_basis_rejected():
    with pytest.raises(DomainError):
        Subspace(3, np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]]))


@given(seeds)
def test_projection_properties_float(seed):
    rng = np.random.default_rng(seed)
    triple, _ = random_compatible_triple(rng, 3)
    t = random_subspace(rng, 6, 3)
    p = orthogonal_projection(triple.g, t)
    assert np.abs(p @ p - p).max() < 1e-12 * max(1, np.abs(p).max())
    # g-self-adjoint: g P = P^T g
    assert np.abs(triple.g @ p - p.T @ triple.g).max() < 1e-10
    assert np.abs(p @ t.basis - t.basis).max() < 1e-10


@given(seeds)
def test_projection_properties_exact(seed):
    rng = np.random.default_rng(seed)
    triple, _ = random_compatible_triple(rng, 2, exact=True)
    t = random_subspace(rng, 4, 2, exact=True)
    p = orthogonal_projection(triple.g, t)
    assert max_abs(p @ p - p) == 0
    assert max_abs(triple.g @ p - p.T @ triple.g) == 0


def test_composition_nested_and_orthogonal_exact():
    g = identity(4, True)
    e = identity(4, True)
    w = Subspace(4, e[:, :2])
    assert projection_composition_check(g, Subspace(4, e[:, :1]), w) == 0
    assert projection_composition_check(g, Subspace(4, e[:, 2:3]), w) == 0


@given(seeds)
def test_composition_exact_is_zero(seed):
    rng = np.random.default_rng(seed)
    triple, a = random_compatible_triple(rng, 2, exact=True)
    v = random_subspace(rng, 4, 1, exact=True)
    w = random_subspace(rng, 4, 2, exact=True)
    assert projection_composition_check(triple.g, v, w) == 0


@given(seeds)
def test_composition_float_dim8(seed):
    rng = np.random.default_rng(seed)
    triple, a = random_compatible_triple(rng, 4)
    v = random_isotropic_subspace(rng, a, 2)
    w = random_isotropic_subspace(rng, a, 3)
    assert projection_composition_check(triple.g, v, w) < 1e-10


def test_standard_triple_valid():
    for exact in (False, True):
        standard_triple(3, exact).validate()


@given(seeds)
def test_random_triples_compatible(seed):
    rng = np.random.default_rng(seed)
    triple, _ = random_compatible_triple(rng, 2, exact=True)
    triple.validate()
    assert all(v == 0 for v in triple.defects().values())


def test_reduce_with_no_group_is_restriction():
    triple = standard_triple(2)
    lt = Subspace.whole(4)
    red = reduce_point(triple, lt, Subspace.zero(4))
    assert red.dim == 4
    assert np.allclose(red.basis.T @ triple.g @ red.basis, red.triple.g)
    red.triple.validate()


def test_circle_model_c2():
    # diagonal circle on C^2 at the level point (1, 0); coordinates (x1, x2, y1, y2)
    triple = standard_triple(2, exact=True)
    p = exact_array([[1], [0], [0], [0]])
    orbit = triple.J @ p  # generator of the circle action at p
    red = reduce_point(triple, None, Subspace(4, orbit))
    assert red.dim == 2
    j = red.triple.J
    assert max_abs(j @ j + identity(2, True)) == 0
    red.triple.validate()


@given(seeds)
def test_random_reduction_dim8(seed):
    rng = np.random.default_rng(seed)
    triple, a = random_compatible_triple(rng, 4)
    gd = random_isotropic_subspace(rng, a, 2)
    red = reduce_point(triple, None, gd)
    assert red.dim == 4
    assert red.triple.defects()["J2"] < 1e-10
    assert red.triple.is_positive_definite()


def test_degenerate_points_rejected():
    triple = standard_triple(1, exact=True)
    e = identity(2, True)
    # orbit direction not tangent to the level set
    with pytest.raises(DegeneratePointError):
        reduce_point(triple, Subspace(2, e[:, :1]), Subspace(2, e[:, 1:2]))
    # J(orbit) inside the level tangent
    with pytest.raises(DegeneratePointError):
        reduce_point(triple, Subspace.whole(2, True), Subspace(2, e[:, :1]))


def test_stages_examples():
    triple = standard_triple(2, exact=True)
    e = identity(4, True)
    v, w = Subspace(4, e[:, :1]), Subspace(4, e[:, 1:2])
    vec = exact_array([0, 0, 3, 4])
    n = stages_norm_check(triple, w, v, vec)
    assert n.direct_sq == n.staged_sq == n.swapped_sq == 25
    vec = exact_array([2, -1, 0, 0])
    n = stages_norm_check(triple, w, v, vec)
    assert n.direct_sq == n.staged_sq == n.swapped_sq == 0


@given(seeds)
def test_stages_random_dim10(seed):
    rng = np.random.default_rng(seed)
    triple, a = random_compatible_triple(rng, 5)
    v = random_isotropic_subspace(rng, a, 2)
    w = random_isotropic_subspace(rng, a, 2)
    vec = rng.standard_normal(10)
    n = stages_norm_check(triple, w, v, vec)
    assert abs(n.direct - n.staged) < 1e-9
    assert abs(n.direct - n.swapped) < 1e-9


@given(seeds)
def test_stages_exact_symmetric(seed):
    rng = np.random.default_rng(seed)
    triple, a = random_compatible_triple(rng, 2, exact=True)
    v = random_subspace(rng, 4, 1, exact=True)
    w = random_subspace(rng, 4, 1, exact=True)
    vec = exact_array([F(int(x)) for x in rng.integers(-3, 4, size=4)])
    n = stages_norm_check(triple, w, v, vec)
    assert n.direct_sq == n.staged_sq == n.swapped_sq
