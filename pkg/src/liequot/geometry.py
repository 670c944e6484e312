"""Exact rational polytopes: hulls, H-representations, and cell splitting.

Points are tuples of ``Fraction``. An H-representation consists of equality
rows ``a.x = b`` and facet rows ``a.x <= b``. Facet normals are chosen inside
the direction space of the affine hull and scaled to coprime integers, which
makes the representation canonical.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._exact import ZERO, dot, nullspace, primitive_row, rank, rref, solve, to_fraction

Point = tuple[Fraction, ...]
Row = tuple[int, ...]  # (a_1..a_r, b)


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _canon_hyperplane(a: Sequence, b) -> Row:
    """Primitive integer row ``(a, b)`` with first nonzero entry of ``a`` positive."""
    row = primitive_row(list(a) + [b])
    for x in row[:-1]:
        if x != 0:
            if x < 0:
                row = tuple(-y for y in row)
            break
    return row


def canonical_equalities(rows: Sequence[Sequence]) -> tuple[Row, ...]:
    """Reduced echelon form of the equality system, rows made primitive."""
    if not rows:
        return ()
    red, _ = rref([list(r) for r in rows])
    return tuple(primitive_row(r) for r in red)


@dataclass(frozen=True)
class Polytope:
    """Convex hull of finitely many rational points, with its H-representation."""

    ambient_dim: int
    vertices: tuple[Point, ...]
    dim: int
    equalities: tuple[Row, ...]
    facets: tuple[Row, ...]

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "Polytope":
        pts = sorted({tuple(to_fraction(x) for x in p) for p in points})
        if not pts:
            raise ValueError("empty point set")
        r = len(pts[0])
        base = pts[0]
        diffs = [_sub(p, base) for p in pts[1:]]
        d = rank(diffs) if diffs else 0
        eq_normals = nullspace(diffs, r) if diffs else [
            [Fraction(int(i == j)) for i in range(r)] for j in range(r)
        ]
        equalities = canonical_equalities([list(a) + [dot(a, base)] for a in eq_normals])
        eq_vecs = [list(e[:-1]) for e in equalities]
        if d == 0:
            return cls(r, (base,), 0, equalities, ())
        facets = set()
        for subset in itertools.combinations(range(len(pts)), d):
            sub = [pts[i] for i in subset]
            rows = [_sub(p, sub[0]) for p in sub[1:]] + eq_vecs
            ns = nullspace(rows, r)
            if len(ns) != 1:
                continue
            a = ns[0]
            b = dot(a, sub[0])
            vals = [dot(a, p) - b for p in pts]
            if all(v <= 0 for v in vals):
                facets.add(_canon_facet(a, b))
            elif all(v >= 0 for v in vals):
                facets.add(_canon_facet([-x for x in a], -b))
        facets = tuple(sorted(facets))
        verts = tuple(
            p for p in pts if _is_vertex(p, facets, eq_vecs, r, d)
        )
        return cls(r, verts, d, equalities, facets)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def canonical_key(self) -> tuple:
        return (self.equalities, self.facets)

    def slacks(self, x: Sequence) -> list[Fraction]:
        """``b - a.x`` for every facet."""
        return [Fraction(f[-1]) - dot(f[:-1], x) for f in self.facets]

    def satisfies_equalities(self, x: Sequence) -> bool:
        return all(dot(e[:-1], x) == e[-1] for e in self.equalities)

    def contains(self, x: Sequence) -> bool:
        x = tuple(to_fraction(v) for v in x)
        return self.satisfies_equalities(x) and all(s >= 0 for s in self.slacks(x))

    def relative_interior_contains(self, x: Sequence) -> bool:
        x = tuple(to_fraction(v) for v in x)
        return self.satisfies_equalities(x) and all(s > 0 for s in self.slacks(x))

    def interior_contains(self, x: Sequence) -> bool:
        return self.is_full_dimensional and self.relative_interior_contains(x)

    def violated_row(self, x: Sequence):
        """A row separating ``x`` from the polytope, or ``None``."""
        x = tuple(to_fraction(v) for v in x)
        for e in self.equalities:
            v = dot(e[:-1], x) - e[-1]
            if v != 0:
                return ("eq", e, v)
        for f in self.facets:
            v = dot(f[:-1], x) - f[-1]
            if v > 0:
                return ("facet", f, v)
        return None

    def centroid(self) -> Point:
        n = len(self.vertices)
        return tuple(sum(c) / n for c in zip(*self.vertices))

    # -- float magnitudes -------------------------------------------------

    @cached_property
    def _float_vertices(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vertices])

    def _projection_pieces(self, gram: np.ndarray):
        """Affinely independent vertex subsets with cached projection data."""
        key = gram.tobytes()
        cache = self.__dict__.setdefault("_proj_cache", {})
        if key in cache:
            return cache[key]
        verts = self._float_vertices
        exact_verts = self.vertices
        pieces = []
        for k in range(1, min(len(verts), self.dim + 1) + 1):
            for subset in itertools.combinations(range(len(verts)), k):
                base = exact_verts[subset[0]]
                diffs = [_sub(exact_verts[i], base) for i in subset[1:]]
                if diffs and rank(diffs) != len(diffs):
                    continue
                p0 = verts[subset[0]]
                d = (verts[list(subset[1:])] - p0).T if k > 1 else np.zeros((len(p0), 0))
                if k > 1:
                    m = d.T @ gram @ d
                    solver = np.linalg.solve(m, d.T @ gram)
                else:
                    solver = np.zeros((0, len(p0)))
                pieces.append((p0, d, solver))
        cache[key] = pieces
        return pieces

    def distance(self, x: Sequence, gram: np.ndarray) -> float:
        """Distance from ``x`` to the polytope in the metric ``gram``."""
        xf = np.array([float(v) for v in x])
        best = math.inf
        for p0, d, solver in self._projection_pieces(gram):
            coef = solver @ (xf - p0) if d.shape[1] else np.zeros(0)
            if np.any(coef < -1e-12) or coef.sum() > 1 + 1e-12:
                continue
            y = p0 + d @ coef
            diff = xf - y
            best = min(best, float(np.sqrt(max(diff @ gram @ diff, 0.0))))
        return best

    def boundary_distance(self, x: Sequence, gram: np.ndarray) -> float:
        """Distance from an interior ``x`` of a full-dimensional polytope to its boundary."""
        xf = np.array([float(v) for v in x])
        ginv = np.linalg.inv(gram)
        best = math.inf
        for f in self.facets:
            a = np.array(f[:-1], dtype=float)
            s = (f[-1] - a @ xf) / math.sqrt(a @ ginv @ a)
            best = min(best, s)
        return float(best)


def _canon_facet(a, b) -> Row:
    return primitive_row(list(a) + [b])


def _is_vertex(p, facets, eq_vecs, r, d) -> bool:
    tight = [list(f[:-1]) for f in facets if dot(f[:-1], p) == f[-1]]
    return rank(tight + eq_vecs) == r if (tight or eq_vecs) else r == 0


# ---------------------------------------------------------------------------
# H-representation to vertices


def vertices_from_hrep(
    r: int, equalities: Sequence[Sequence], inequalities: Sequence[Sequence]
) -> list[Point]:
    """Vertices of ``{a.x = b} ∩ {a.x <= b}`` (assumed bounded), by brute force."""
    eqs = [tuple(to_fraction(v) for v in e) for e in equalities]
    ineqs = [tuple(to_fraction(v) for v in f) for f in inequalities]
    eq_rank = rank([list(e[:-1]) for e in eqs]) if eqs else 0
    need = r - eq_rank
    out = set()
    for subset in itertools.combinations(range(len(ineqs)), need):
        rows = [list(e[:-1]) for e in eqs] + [list(ineqs[i][:-1]) for i in subset]
        rhs = [e[-1] for e in eqs] + [ineqs[i][-1] for i in subset]
        if rank(rows) != r:
            continue
        red, piv = rref([row + [b] for row, b in zip(rows, rhs)], r + 1)
        if r in piv:
            continue
        x = [Fraction(0)] * r
        for row, pc in zip(red, piv):
            x[pc] = row[-1]
        x = tuple(x)
        if all(dot(e[:-1], x) == e[-1] for e in eqs) and all(dot(f[:-1], x) <= f[-1] for f in ineqs):
            out.add(x)
    return sorted(out)


def intersect(p: Polytope, q: Polytope) -> Polytope | None:
    """``p ∩ q`` as a polytope, ``None`` when empty."""
    eqs = list(p.equalities) + list(q.equalities)
    ineqs = list(p.facets) + list(q.facets)
    verts = vertices_from_hrep(p.ambient_dim, eqs, ineqs)
    if not verts:
        return None
    return Polytope.from_points(verts)


def box(lo: Sequence, hi: Sequence) -> Polytope:
    lo = [to_fraction(x) for x in lo]
    hi = [to_fraction(x) for x in hi]
    pts = list(itertools.product(*[(a, b) for a, b in zip(lo, hi)]))
    return Polytope.from_points(pts)


# ---------------------------------------------------------------------------
# cells of a hyperplane arrangement inside a polytope


@dataclass
class Cell:
    """Open convex cell: ``a.x < b`` for its constraint rows.

    ``vertices`` pairs each vertex with the set of constraint indices tight there.
    """

    constraints: list[tuple[tuple[Fraction, ...], Fraction]]
    vertices: list[tuple[Point, frozenset[int]]]

    def points(self) -> list[Point]:
        return [v for v, _ in self.vertices]

    def centroid(self) -> Point:
        pts = self.points()
        return tuple(sum(c) / len(pts) for c in zip(*pts))

    def _is_edge(self, t1: frozenset, t2: frozenset, r: int) -> bool:
        common = t1 & t2
        if r == 1:
            return True
        if len(common) < r - 1:
            return False
        return rank([list(self.constraints[i][0]) for i in common]) == r - 1

    def split(self, a: Sequence, b, r: int) -> tuple["Cell | None", "Cell | None"]:
        """Split by ``a.x = b``; returns ``(negative side, positive side)``."""
        vals = [dot(a, v) - b for v, _ in self.vertices]
        if all(x >= 0 for x in vals):
            return None, self
        if all(x <= 0 for x in vals):
            return self, None
        k = len(self.constraints)
        neg_c = self.constraints + [(tuple(a), b)]
        pos_c = self.constraints + [(tuple(-x for x in a), -b)]
        neg_v, pos_v = [], []
        for (v, t), x in zip(self.vertices, vals):
            if x < 0:
                neg_v.append((v, t))
            elif x > 0:
                pos_v.append((v, t))
            else:
                neg_v.append((v, t | {k}))
                pos_v.append((v, t | {k}))
        n = len(self.vertices)
        for i in range(n):
            for j in range(i + 1, n):
                xi, xj = vals[i], vals[j]
                if (xi < 0 < xj) or (xj < 0 < xi):
                    (vi, ti), (vj, tj) = self.vertices[i], self.vertices[j]
                    if not self._is_edge(ti, tj, r):
                        continue
                    s = xi / (xi - xj)
                    p = tuple(a_ + s * (b_ - a_) for a_, b_ in zip(vi, vj))
                    tag = (ti & tj) | {k}
                    neg_v.append((p, tag))
                    pos_v.append((p, tag))
        return Cell(neg_c, _dedupe(neg_v)), Cell(pos_c, _dedupe(pos_v))


def _dedupe(vs):
    seen = {}
    for p, t in vs:
        if p in seen:
            seen[p] = seen[p] | t
        else:
            seen[p] = t
    return [(p, seen[p]) for p in sorted(seen)]


def region_cell(region: Polytope) -> Cell:
    if not region.is_full_dimensional:
        raise ValueError("region must be full-dimensional")
    cons = [(tuple(Fraction(x) for x in f[:-1]), Fraction(f[-1])) for f in region.facets]
    verts = []
    for v in region.vertices:
        tight = frozenset(i for i, (a, b) in enumerate(cons) if dot(a, v) == b)
        verts.append((v, tight))
    return Cell(cons, verts)


def split_region(region: Polytope, hyperplanes: Sequence[Row]) -> list[Cell]:
    """Cells of the arrangement restricted to ``region``."""
    r = region.ambient_dim
    cells = [region_cell(region)]
    for h in hyperplanes:
        a = tuple(Fraction(x) for x in h[:-1])
        b = Fraction(h[-1])
        nxt = []
        for c in cells:
            lo, hi = c.split(a, b, r)
            if lo is not None:
                nxt.append(lo)
            if hi is not None:
                nxt.append(hi)
        cells = nxt
    return cells


def sign_vector(point: Sequence, hyperplanes: Sequence[Row]) -> tuple[int, ...]:
    out = []
    for h in hyperplanes:
        v = dot(h[:-1], point) - h[-1]
        out.append((v > 0) - (v < 0))
    return tuple(out)


def hyperplane_of(p: Polytope) -> Row | None:
    """The hyperplane spanned by a codimension-one polytope."""
    if p.dim != p.ambient_dim - 1:
        return None
    (e,) = p.equalities
    return _canon_hyperplane(e[:-1], e[-1])


def relative_facet_hyperplanes(p: Polytope) -> list[Row]:
    """Hyperplanes of the ambient space through each relative facet of ``p``.

    Facet rows of ``p`` have normals inside its direction space, so each row
    already cuts the ambient space along the facet's affine hull.
    """
    return [_canon_hyperplane(f[:-1], f[-1]) for f in p.facets]
