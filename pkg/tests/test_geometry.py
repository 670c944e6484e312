from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial import ConvexHull

from liequot.geometry import Polytope, box, intersect, sign_vector, split_region

points2 = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=7)


@given(points2)
def test_hull_vertices_match_qhull(pts):
    p = Polytope.from_points(pts)
    arr = np.unique(np.array(pts, dtype=float), axis=0)
    if p.dim == 2:
        hull = ConvexHull(arr)
        assert {tuple(arr[i]) for i in hull.vertices} == {tuple(map(float, v)) for v in p.vertices}
        assert len(p.facets) == len(hull.simplices)
    else:
        assert np.linalg.matrix_rank(arr - arr[0]) == p.dim


@given(points2, st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_contains_matches_qhull_equations(pts, x):
    p = Polytope.from_points(pts)
    if p.dim < 2:
        return
    hull = ConvexHull(np.array(pts, dtype=float))
    inside = np.all(hull.equations[:, :2] @ np.array(x, dtype=float) + hull.equations[:, 2] <= 1e-12)
    assert p.contains(x) == bool(inside)


def test_lower_dimensional_hulls():
    seg = Polytope.from_points([(0, 0), (2, 2)])
    assert seg.dim == 1 and len(seg.equalities) == 1
    assert seg.relative_interior_contains((1, 1))
    assert not seg.interior_contains((1, 1))
    assert not seg.contains((1, 0))
    pt = Polytope.from_points([(1, 2)])
    assert pt.dim == 0 and pt.contains((1, 2))


def test_box_split_and_intersect():
    b = box((0, 0), (2, 2))
    cells = split_region(b, [(1, 0, 1), (0, 1, 1)])
    assert len(cells) == 4
    tri = Polytope.from_points([(0, 0), (4, 0), (0, 4)])
    both = intersect(b, tri)
    assert both.contains((2, 2)) and both.contains((2, 0)) and not both.contains((F(5, 2), 0))
    assert sign_vector((F(1, 2), 3), [(1, 0, 1), (0, 1, 1)]) == (-1, 1)


def test_empty_point_set():
    with pytest.raises(ValueError):
        Polytope.from_points([])
