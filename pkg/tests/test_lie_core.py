from collections import Counter
from fractions import Fraction as F
from itertools import permutations
from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from liequot.errors import CapabilityError, ConfigurationError, DomainError
from liequot.lie_core import (
    Face,
    WeylGroup,
    build_root_system,
    coroot,
    decomposition_dims,
    face_of,
    face_root_sets,
    faces,
    irrep_dimension,
    is_dominant_integral,
    random_point_in_face,
    weights_of_irrep,
    weyl_dimension,
)

A = {r: build_root_system("A", r) for r in range(1, 5)}


def test_a1_normalisation():
    rs = A[1]
    (alpha,) = rs.simple_roots
    (w,) = rs.fundamental_weights
    assert rs.inner(alpha, alpha) == 2
    assert w == tuple(x / 2 for x in alpha)
    assert rs.pairing(w, alpha) == 1


def test_a2_cartan_and_roots():
    rs = A[2]
    assert rs.cartan_matrix == ((2, -1), (-1, 2))
    assert len(rs.positive_roots) == 3


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_type_a_counts(r):
    rs = A[r]
    assert len(rs.positive_roots) == r * (r + 1) // 2
    assert len(rs.weyl_group.elements) == factorial(r + 1)


def test_positive_roots_oracle():
    # independent enumeration: e_i - e_j for i < j
    for r in range(1, 5):
        n = r + 1
        expected = {tuple(F(int(k == i) - int(k == j)) for k in range(n)) for i in range(n) for j in range(i + 1, n)}
        assert set(A[r].positive_roots) == expected


def test_weyl_group_is_permutation_group():
    # independent oracle: W(A_r) acts on the frame as all coordinate permutations
    rs = A[3]
    v = (F(5), F(3), F(2), F(0))
    orbit = {WeylGroup.act(g, v) for g in rs.weyl_group.elements}
    assert orbit == set(permutations(v))


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_cartan_invariants(r):
    rs = A[r]
    c = rs.cartan_matrix
    for i in range(r):
        assert c[i][i] == 2
        for j in range(r):
            a, b = rs.simple_roots[i], rs.simple_roots[j]
            assert c[i][j] == 2 * rs.inner(a, b) / rs.inner(b, b)
            if i != j:
                assert c[i][j] <= 0


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_fundamental_weight_duality(r):
    rs = A[r]
    for i, w in enumerate(rs.fundamental_weights):
        for j, a in enumerate(rs.simple_roots):
            assert rs.pairing(w, a) == (1 if i == j else 0)


def test_simple_roots_once_and_closure():
    for r in range(1, 5):
        rs = A[r]
        pos = list(rs.positive_roots)
        assert all(pos.count(a) == 1 for a in rs.simple_roots)
        roots = set(rs.roots)
        for a in rs.simple_roots:
            assert {rs.reflect(b, a) for b in roots} == roots


def test_build_errors():
    with pytest.raises(ConfigurationError):
        build_root_system("Q", 2)
    with pytest.raises(CapabilityError):
        build_root_system("B", 2)
    with pytest.raises(CapabilityError):
        build_root_system("A", 5)
    with pytest.raises(ConfigurationError):
        build_root_system("A", 0)


@pytest.mark.parametrize("series,rank,n_pos", [("B", 2, 4), ("C", 3, 9), ("D", 4, 12)])
def test_other_series_behind_flag(series, rank, n_pos):
    rs = build_root_system(series, rank, experimental=True)
    assert len(rs.positive_roots) == n_pos
    for i, w in enumerate(rs.fundamental_weights):
        for j, a in enumerate(rs.simple_roots):
            assert rs.pairing(w, a) == (1 if i == j else 0)


def test_coroot_examples():
    rs = A[1]
    a = rs.simple_roots[0]
    assert rs.pairing(a, a) == 2
    assert coroot(rs, a) == a
    rs = A[2]
    a1, a2 = rs.simple_roots
    theta = tuple(x + y for x, y in zip(a1, a2))
    assert coroot(rs, theta) == tuple(x + y for x, y in zip(coroot(rs, a1), coroot(rs, a2)))
    assert rs.pairing(rs.fundamental_weights[1], a1) == 0
    with pytest.raises(DomainError):
        coroot(rs, (F(1), F(0), F(0)))


def test_coroot_pairing_formula():
    rs = A[3]
    for a in rs.positive_roots:
        av = coroot(rs, a)
        for b in rs.roots:
            assert sum(x * y for x, y in zip(b, av)) == 2 * rs.inner(b, a) / rs.inner(a, a)


def test_face_of_examples():
    rs = A[2]
    w1, w2 = rs.fundamental_weights
    assert face_of(rs, tuple(a + b for a, b in zip(w1, w2))).vanishing_set == frozenset()
    # simple-root index 1 is index 0 here
    assert face_of(rs, w2).vanishing_set == frozenset({0})
    assert face_of(A[1], (F(0), F(0))).vanishing_set == frozenset({0})
    with pytest.raises(DomainError):
        face_of(rs, tuple(-x for x in w1))


def test_face_root_sets_examples():
    rs = A[2]
    r_int, _ = face_root_sets(rs, Face(frozenset(), 2))
    assert r_int == []
    r1, s1 = face_root_sets(rs, Face(frozenset({0}), 2))
    a1 = rs.simple_roots[0]
    assert set(r1) == {a1, tuple(-x for x in a1)}
    r12, _ = face_root_sets(A[3], Face(frozenset({0, 1}), 3))
    assert len(r12) == 6


def test_decomposition_dims_examples():
    rs = A[2]
    assert decomposition_dims(rs, Face(frozenset(), 2)) == (0, 8)
    assert decomposition_dims(rs, Face(frozenset({0}), 2)) == (3, 5)
    assert decomposition_dims(A[1], Face(frozenset({0}), 1)) == (3, 0)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_decomposition_dims_sum(r):
    rs = A[r]
    for f in faces(rs):
        a, b = decomposition_dims(rs, f)
        assert a + b == rs.dim_k


def test_faces_count():
    for r in range(1, 5):
        assert len(faces(A[r])) == 2**r


def test_weights_examples():
    rs = A[1]
    (w,) = rs.fundamental_weights
    got = dict(weights_of_irrep(rs, w))
    assert got == {w: 1, tuple(-x for x in w): 1}
    rs = A[2]
    w1, w2 = rs.fundamental_weights
    a1, a2 = rs.simple_roots
    got = dict(weights_of_irrep(rs, w1))
    expected = {
        w1: 1,
        tuple(p - q for p, q in zip(w1, a1)): 1,
        tuple(p - q - s for p, q, s in zip(w1, a1, a2)): 1,
    }
    assert got == expected
    adj = dict(weights_of_irrep(rs, tuple(a + b for a, b in zip(w1, w2))))
    assert irrep_dimension(adj.items()) == 8
    assert adj[(F(0), F(0), F(0))] == 2


def test_weights_reject_non_dominant():
    rs = A[2]
    with pytest.raises(DomainError):
        weights_of_irrep(rs, tuple(-x for x in rs.fundamental_weights[0]))


def _gl_weight_oracle(n, partition):
    """Weights of the GL(n) irrep via semistandard tableaux enumeration (independent route)."""
    from itertools import product

    shape = list(partition)
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    counts = Counter()
    for fill in product(range(n), repeat=len(cells)):
        t = dict(zip(cells, fill))
        ok = all(
            (j == 0 or t[(i, j - 1)] <= t[(i, j)]) and (i == 0 or t[(i - 1, j)] < t[(i, j)]) for (i, j) in cells
        )
        if ok:
            counts[tuple(sum(1 for v in fill if v == k) for k in range(n))] += 1
    return counts


@pytest.mark.parametrize("r,coeffs", [(1, (3,)), (2, (2, 1)), (2, (1, 1)), (3, (1, 0, 1)), (3, (0, 2, 0))])
def test_freudenthal_against_tableaux(r, coeffs):
    rs = A[r]
    n = r + 1
    partition = [sum(coeffs[i:]) for i in range(r)]
    hw = rs.from_omega(coeffs)
    got = Counter({w: m for w, m in weights_of_irrep(rs, hw)})
    oracle = _gl_weight_oracle(n, partition)
    # project GL weights to the traceless frame
    proj = Counter()
    for w, m in oracle.items():
        mean = F(sum(w), n)
        proj[tuple(F(x) - mean for x in w)] += m
    assert got == proj
    assert sum(got.values()) == weyl_dimension(rs, hw)


@given(st.integers(1, 3).flatmap(lambda r: st.tuples(st.just(r), st.lists(st.integers(0, 2), min_size=r, max_size=r))))
def test_weights_weyl_invariant_and_dimension(args):
    r, coeffs = args
    rs = A[r]
    hw = rs.from_omega(coeffs)
    assert is_dominant_integral(rs, hw)
    ws = dict(weights_of_irrep(rs, hw))
    for g in rs.weyl_group.elements:
        assert {WeylGroup.act(g, w): m for w, m in ws.items()} == ws
    assert irrep_dimension(ws.items()) == weyl_dimension(rs, hw)


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_random_point_in_face_membership(r, seed):
    rs = A[r]
    rng = np.random.default_rng(seed)
    for f in faces(rs):
        lam = random_point_in_face(rs, f, rng)
        assert f.contains(rs, lam)
        assert face_of(rs, lam) == f
