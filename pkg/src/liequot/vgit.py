"""Torus semistability on projectivised weight spaces, walls and chambers.

A point class of ``P(V)`` is a *support*: the set of weight indices whose
homogeneous coordinates are non-zero. Its moment image is the convex hull of
those weights (the fixed component with weight ``w`` sits at ``w``), and
semistability at level ``lam`` means ``lam`` lies in that hull.

Three independent exact routes decide membership:

* :func:`is_semistable` / :func:`is_stable` solve a rational LP over convex
  coefficients;
* :func:`m_function` reads the sign off the canonical H-representation;
* :func:`d_rho_sweep` maximises the literal ``d_rho`` over a finite pool of
  rational directions that contains every facet normal that can occur.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._exact import ONE, ZERO, dot, fmt, inverse, lp_standard, nullspace, primitive_row, rank, rref, to_fraction
from .errors import CapabilityError, ConfigurationError, DomainError
from .lie_core import WeylGroup
from .geometry import (
    Cell,
    Point,
    Polytope,
    box,
    hyperplane_of,
    intersect,
    relative_facet_hyperplanes,
    sign_vector,
    split_region,
    vertices_from_hrep,
)

Support = tuple[int, ...]

NEGATIVE, ZERO_SIGN, POSITIVE = -1, 0, 1


def _vec(xs) -> Point:
    return tuple(to_fraction(x) for x in xs)


@dataclass(frozen=True, eq=False)
class WeightConfig:
    """Distinct rational weights with multiplicities and an inner product."""

    rank: int
    weights: tuple[Point, ...]
    mults: tuple[int, ...] = ()
    gram: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        r = int(self.rank)
        if r < 1:
            raise ConfigurationError("rank must be positive")
        ws = tuple(_vec(w) for w in self.weights)
        if not ws:
            raise ConfigurationError("weight list is empty")
        if any(len(w) != r for w in ws):
            raise ConfigurationError("weight has the wrong number of coordinates")
        if len(set(ws)) != len(ws):
            raise ConfigurationError("weights must be pairwise distinct")
        mults = tuple(int(m) for m in self.mults) if self.mults else (1,) * len(ws)
        if len(mults) != len(ws) or any(m < 1 for m in mults):
            raise ConfigurationError("multiplicities must be positive integers, one per weight")
        if self.gram:
            g = tuple(_vec(row) for row in self.gram)
            if len(g) != r or any(len(row) != r for row in g):
                raise ConfigurationError("gram matrix has the wrong shape")
            if any(g[i][j] != g[j][i] for i in range(r) for j in range(r)):
                raise ConfigurationError("gram matrix must be symmetric")
            if np.any(np.linalg.eigvalsh(np.array(g, dtype=float)) <= 0):
                raise ConfigurationError("gram matrix must be positive-definite")
        else:
            g = tuple(tuple(ONE if i == j else ZERO for j in range(r)) for i in range(r))
        object.__setattr__(self, "rank", r)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "mults", mults)
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "_hulls", {})
        object.__setattr__(self, "_degenerate", {})

    @property
    def n(self) -> int:
        return len(self.weights)

    @cached_property
    def gram_float(self) -> np.ndarray:
        return np.array(self.gram, dtype=float)

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        return sum((u[i] * self.gram[i][j] * v[j] for i in range(self.rank) for j in range(self.rank)), ZERO)

    def support_weights(self, s: Support) -> list[Point]:
        return [self.weights[i] for i in s]

    def hull(self, s: Support) -> Polytope:
        s = check_support(self, s)
        h = self._hulls.get(s)
        if h is None:
            h = Polytope.from_points(self.support_weights(s))
            self._hulls[s] = h
        return h

    def supports(self) -> list[Support]:
        return all_supports(self.n)

    def to_json(self) -> dict:
        out = {
            "rank": self.rank,
            "weights": [{"w": [fmt(x) for x in w], "mult": m} for w, m in zip(self.weights, self.mults)],
        }
        if any(self.gram[i][j] != (i == j) for i in range(self.rank) for j in range(self.rank)):
            out["gram"] = [[fmt(x) for x in row] for row in self.gram]
        return out

    def __eq__(self, other):
        return isinstance(other, WeightConfig) and (self.rank, self.weights, self.mults, self.gram) == (
            other.rank, other.weights, other.mults, other.gram)

    def __hash__(self):
        return hash((self.rank, self.weights, self.mults, self.gram))


def all_supports(n: int) -> list[Support]:
    """All ``2^n - 1`` non-empty index subsets, by size then lexicographically."""
    return [c for k in range(1, n + 1) for c in itertools.combinations(range(n), k)]


def check_support(cfg: WeightConfig, s: Iterable[int]) -> Support:
    s = tuple(sorted(set(int(i) for i in s)))
    if not s:
        raise DomainError("support must be non-empty")
    if s[0] < 0 or s[-1] >= cfg.n:
        raise DomainError("support index out of range")
    return s


def _check_lambda(cfg: WeightConfig, lam) -> Point:
    lam = _vec(lam)
    if len(lam) != cfg.rank:
        raise DomainError("lambda has the wrong number of coordinates")
    return lam


# ---------------------------------------------------------------------------
# support data


def sh_set(cfg: WeightConfig, s: Support) -> Support:
    """Indices in ``s`` whose weights are vertices of the support hull."""
    s = check_support(cfg, s)
    verts = set(cfg.hull(s).vertices)
    return tuple(i for i in s if cfg.weights[i] in verts)


def has_positive_dim_stabilizer(cfg: WeightConfig, s: Support) -> bool:
    s = check_support(cfg, s)
    cache = cfg._degenerate
    out = cache.get(s)
    if out is None:
        base = cfg.weights[s[0]]
        diffs = [tuple(a - b for a, b in zip(cfg.weights[i], base)) for i in s[1:]]
        out = cache[s] = (rank(diffs) if diffs else 0) < cfg.rank
    return out


# ---------------------------------------------------------------------------
# LP route


def _convex_rows(cfg: WeightConfig, s: Support, lam: Point):
    ws = cfg.support_weights(s)
    rows = [[w[k] for w in ws] for k in range(cfg.rank)] + [[ONE] * len(ws)]
    rhs = list(lam) + [ONE]
    return rows, rhs


def is_semistable(cfg: WeightConfig, s: Support, lam) -> bool:
    """``lam`` in the convex hull of the support weights (exact LP)."""
    s = check_support(cfg, s)
    lam = _check_lambda(cfg, lam)
    rows, rhs = _convex_rows(cfg, s, lam)
    return lp_standard([ZERO] * len(s), rows, rhs).status == "optimal"


def is_stable(cfg: WeightConfig, s: Support, lam) -> bool:
    """``lam`` in the interior of a full-dimensional support hull (exact LP).

    Maximises ``t`` over representations ``lam = sum c_i w_i`` with
    ``c_i >= t``; the point is interior iff the optimum is positive.
    """
    s = check_support(cfg, s)
    lam = _check_lambda(cfg, lam)
    if has_positive_dim_stabilizer(cfg, s):
        return False
    if not is_semistable(cfg, s, lam):
        return False
    # c_i = t + d_i with t, d_i >= 0; maximise t
    ws = cfg.support_weights(s)
    m = len(s)
    rows = [[sum((w[k] for w in ws), ZERO)] + [w[k] for w in ws] for k in range(cfg.rank)]
    rows.append([Fraction(m)] + [ONE] * m)
    rhs = list(lam) + [ONE]
    res = lp_standard([-ONE] + [ZERO] * m, rows, rhs)
    return res.status == "optimal" and -res.value > 0


# ---------------------------------------------------------------------------
# numerical function


@dataclass(frozen=True)
class MValue:
    """Exact sign and float magnitude of the numerical function."""

    sign: int
    magnitude: float
    certificate: tuple = ()

    @property
    def value(self) -> float:
        return self.sign * self.magnitude

    def sign_label(self) -> str:
        return {NEGATIVE: "negative", ZERO_SIGN: "zero", POSITIVE: "positive"}[self.sign]


def m_sign(cfg: WeightConfig, s: Support, lam) -> int:
    """Sign of ``M`` from the H-representation of the support hull."""
    hull = cfg.hull(s)
    lam = _check_lambda(cfg, lam)
    if hull.violated_row(lam) is not None:
        return POSITIVE
    if hull.interior_contains(lam):
        return NEGATIVE
    return ZERO_SIGN


def m_function(cfg: WeightConfig, s: Support, lam) -> MValue:
    """Signed distance from ``lam`` to the support hull, in the config's metric.

    Positive outside (distance to the hull), negative strictly inside a
    full-dimensional hull (minus the distance to the boundary), zero otherwise.
    The certificate is a separating row outside, the minimal facet slack
    inside, and the empty tuple on the boundary.
    """
    s = check_support(cfg, s)
    lam = _check_lambda(cfg, lam)
    hull = cfg.hull(s)
    sep = hull.violated_row(lam)
    if sep is not None:
        return MValue(POSITIVE, hull.distance(lam, cfg.gram_float), sep)
    if hull.interior_contains(lam):
        slack = min(hull.slacks(lam))
        return MValue(NEGATIVE, hull.boundary_distance(lam, cfg.gram_float), ("interior", slack))
    return MValue(ZERO_SIGN, 0.0, ())


def _g_norm(cfg: WeightConfig, v: Sequence) -> float:
    return math.sqrt(float(cfg.inner(v, v)))


def lambda_fn(cfg: WeightConfig, s: Support, lam, w: Sequence) -> float:
    """``max_{i in s} <w_i - lam, W>`` for the unit direction ``W``."""
    s = check_support(cfg, s)
    lam = _check_lambda(cfg, lam)
    w = _vec(w)
    if all(x == 0 for x in w):
        raise DomainError("direction must be non-zero")
    top = max(cfg.inner(tuple(a - b for a, b in zip(cfg.weights[i], lam)), w) for i in s)
    return float(top) / _g_norm(cfg, w)


def lambda_fn_exact(cfg: WeightConfig, s: Support, lam, w: Sequence) -> Fraction:
    """Unnormalised support-function value; its sign is that of :func:`lambda_fn`."""
    lam = _vec(lam)
    w = _vec(w)
    return max(cfg.inner(tuple(a - b for a, b in zip(cfg.weights[i], lam)), w) for i in s)


def orbit_limit_support(cfg: WeightConfig, s: Support, w: Sequence) -> Support:
    """Support of the limit of ``exp(iWt) x``: the maximisers of ``<w_i, W>``."""
    s = check_support(cfg, s)
    w = _vec(w)
    vals = {i: cfg.inner(cfg.weights[i], w) for i in s}
    top = max(vals.values())
    return tuple(i for i in s if vals[i] == top)


def d_rho(cfg: WeightConfig, s: Support, lam, rho: Sequence) -> float:
    """Signed distance from the origin to the projected hull along ``rho``.

    Projects ``conv(weights(s)) - lam`` onto the ray spanned by ``rho`` and
    returns the lower end of the resulting interval, so a positive value means
    the whole hull lies strictly on the positive side of ``rho``.
    """
    s = check_support(cfg, s)
    lam = _check_lambda(cfg, lam)
    rho = _vec(rho)
    if all(x == 0 for x in rho):
        raise DomainError("rho must be non-zero")
    low = min(cfg.inner(tuple(a - b for a, b in zip(cfg.weights[i], lam)), rho) for i in s)
    return float(low) / _g_norm(cfg, rho)


def d_rho_exact(cfg: WeightConfig, s: Support, lam, rho: Sequence) -> Fraction:
    lam = _vec(lam)
    return min(cfg.inner(tuple(a - b for a, b in zip(cfg.weights[i], lam)), rho) for i in s)


# ---------------------------------------------------------------------------
# d_rho sweep over a finite direction pool


def _dual_to_direction(cfg: WeightConfig, a: Sequence) -> Point:
    """Vector ``rho`` with ``<x, rho>_G = a.x`` for all ``x``."""
    ginv = inverse([list(row) for row in cfg.gram])
    return tuple(sum((ginv[i][j] * a[j] for j in range(cfg.rank)), ZERO) for i in range(cfg.rank))


def direction_pool(cfg: WeightConfig, rng=None, n_random: int = 720) -> list[Point]:
    """Rational directions containing every normal that a support hull can have.

    Normals of all ``(r-1)``-subsets of pairwise weight differences and
    coordinate axes, with both signs, plus ``n_random`` random rational
    directions. Directions are returned as G-duals of the normals.
    """
    r = cfg.rank
    gens = set()
    for i, j in itertools.combinations(range(cfg.n), 2):
        gens.add(primitive_row([a - b for a, b in zip(cfg.weights[i], cfg.weights[j])]))
    for k in range(r):
        gens.add(tuple(int(k == m) for m in range(r)))
    gens = sorted(g for g in gens if any(g))
    normals = set()
    if r == 1:
        normals = {(1,), (-1,)}
    else:
        for comb in itertools.combinations(gens, r - 1):
            ns = nullspace([list(map(Fraction, c)) for c in comb], r)
            if len(ns) == 1:
                a = primitive_row(ns[0])
                normals.add(a)
                normals.add(tuple(-x for x in a))
    out = sorted(normals)
    if rng is not None and n_random:
        for _ in range(n_random):
            v = tuple(Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 8))) for _ in range(r))
            if any(v):
                out.append(v)
    return [_dual_to_direction(cfg, a) for a in out]




_INT64_SAFE = 2**62


class DirectionPool:
    """Finite set of directions with an integer table for exact ``d_rho`` signs.

    ``<w_i - lam, rho_j>_G`` is evaluated as ``M_ij / (scale * q)`` with
    integer ``M`` so that minima and signs over the whole pool vectorise.
    """

    def __init__(self, cfg: WeightConfig, directions: Sequence[Point]):
        self.cfg = cfg
        self.directions = [tuple(d) for d in directions]
        r = cfg.rank
        # P[k, j] = (G rho_j)_k, cleared of denominators by ``pden``
        grho = [[sum((cfg.gram[k][m] * d[m] for m in range(r)), ZERO) for d in self.directions] for k in range(r)]
        pden = 1
        for row in grho:
            for v in row:
                pden = math.lcm(pden, v.denominator)
        wden = 1
        for w in cfg.weights:
            for v in w:
                wden = math.lcm(wden, v.denominator)
        self.pden, self.wden = pden, wden
        p_int = [[int(v * pden) for v in row] for row in grho]
        w_int = [[int(v * wden) for v in w] for w in cfg.weights]
        big = max((abs(v) for row in p_int for v in row), default=0) * max(
            (abs(v) for row in w_int for v in row), default=0) * r
        self._dtype = np.int64 if big < 2**40 else object
        self.p = np.array(p_int, dtype=self._dtype).reshape(r, len(self.directions))
        self.a = np.array(w_int, dtype=self._dtype).reshape(cfg.n, r) @ self.p
        self.norms = np.array([_g_norm(cfg, d) for d in self.directions])

    def __len__(self) -> int:
        return len(self.directions)

    def shifted(self, lam: Sequence) -> tuple[np.ndarray, int]:
        """Integer matrix ``M`` and scale ``D`` with ``<w_i - lam, rho_j> = M_ij / D``."""
        lam = _vec(lam)
        q = 1
        for v in lam:
            q = math.lcm(q, v.denominator)
        l_int = [int(v * q) for v in lam]
        dtype = self._dtype
        bound = int(np.abs(self.a).max()) * q + self.wden * sum(abs(v) for v in l_int) * int(
            np.abs(self.p).max() if self.p.size else 0)
        if bound >= _INT64_SAFE:
            dtype = object
        a = self.a.astype(dtype)
        lrow = np.array(l_int, dtype=dtype) @ self.p.astype(dtype)
        return a * q - self.wden * lrow, self.pden * self.wden * q

    def sweep(self, s: Support, lam: Sequence) -> "SweepResult":
        m, den = self.shifted(lam)
        low = m[list(check_support(self.cfg, s)), :].min(axis=0)
        return self._result(low, den)

    def sweep_all(self, lam: Sequence, supports: Sequence[Support]) -> list[int]:
        """Exact sweep signs for many supports at once (subset minima by bitmask)."""
        m, _ = self.shifted(lam)
        n = self.cfg.n
        mins = {}
        out = []
        for s in supports:
            mask = 0
            for i in s:
                mask |= 1 << i
            out.append(int(np.sign(_subset_min(mins, m, mask).max())))
        return out

    def _result(self, low: np.ndarray, den: int) -> "SweepResult":
        k = int(np.argmax(low.astype(float) / self.norms))
        top = low.max()
        sign = (top > 0) - (top < 0)
        return SweepResult(int(sign), Fraction(int(low[k]), den), self.directions[k],
                           float(Fraction(int(low[k]), den)) / self.norms[k])


def _subset_min(cache: dict, m: np.ndarray, mask: int) -> np.ndarray:
    row = cache.get(mask)
    if row is not None:
        return row
    low = mask & -mask
    i = low.bit_length() - 1
    rest = mask ^ low
    row = m[i] if rest == 0 else np.minimum(_subset_min(cache, m, rest), m[i])
    cache[mask] = row
    return row


@dataclass(frozen=True)
class SweepResult:
    """Best ``d_rho`` over a pool: exact sign, exact unnormalised value, magnitude."""

    sign: int
    best: Fraction
    best_direction: Point
    magnitude: float


def d_rho_sweep(cfg: WeightConfig, s: Support, lam, pool: DirectionPool | None = None, rng=None) -> SweepResult:
    if pool is None:
        pool = DirectionPool(cfg, direction_pool(cfg, rng))
    return pool.sweep(s, lam)


# ---------------------------------------------------------------------------
# walls


@dataclass(frozen=True)
class WallPiece:
    """``conv(weights(s)) ∩ region`` for supports with positive-dimensional stabiliser."""

    polytope: Polytope
    supports: tuple[Support, ...]

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def sample(self) -> Point:
        """A point of the relative interior (vertex centroid)."""
        return self.polytope.centroid()

    def contains(self, lam) -> bool:
        return self.polytope.contains(lam)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "equalities": [list(e) for e in self.polytope.equalities],
            "inequalities": [list(f) for f in self.polytope.facets],
            "vertices": [[fmt(x) for x in v] for v in self.polytope.vertices],
            "supports": [list(s) for s in self.supports],
        }


def as_region(cfg: WeightConfig, region) -> Polytope:
    """Accept a :class:`Polytope`, a list of ``(lo, hi)`` bounds, or ``None``.

    ``None`` means the bounding box of the weights enlarged by one unit.
    """
    if isinstance(region, Polytope):
        out = region
    elif region is None:
        lo = [min(w[k] for w in cfg.weights) - 1 for k in range(cfg.rank)]
        hi = [max(w[k] for w in cfg.weights) + 1 for k in range(cfg.rank)]
        out = box(lo, hi)
    else:
        bounds = [tuple(to_fraction(x) for x in b) for b in region]
        if len(bounds) != cfg.rank or any(len(b) != 2 or b[0] >= b[1] for b in bounds):
            raise ConfigurationError("region must give lo < hi for every coordinate")
        out = box([b[0] for b in bounds], [b[1] for b in bounds])
    if out.ambient_dim != cfg.rank or not out.is_full_dimensional:
        raise ConfigurationError("region must be a full-dimensional polytope in t*")
    return out


def degenerate_supports(cfg: WeightConfig) -> list[Support]:
    return [s for s in cfg.supports() if has_positive_dim_stabilizer(cfg, s)]


def walls(cfg: WeightConfig, region=None) -> list[WallPiece]:
    """Deduplicated wall pieces inside ``region``, canonically ordered."""
    region = as_region(cfg, region)
    by_hull: dict[tuple, list[Support]] = {}
    for s in degenerate_supports(cfg):
        by_hull.setdefault(cfg.hull(s).canonical_key(), []).append(s)
    pieces: dict[tuple, tuple[Polytope, list]] = {}
    for key, sups in by_hull.items():
        clipped = intersect(cfg.hull(sups[0]), region)
        if clipped is None:
            continue
        k = clipped.canonical_key()
        if k in pieces:
            pieces[k][1].extend(sups)
        else:
            pieces[k] = (clipped, list(sups))
    out = [WallPiece(p, tuple(sorted(sups, key=lambda s: (len(s), s)))) for p, sups in pieces.values()]
    out.sort(key=lambda w: (-w.dim, w.polytope.vertices))
    return out


def walls_bruteforce(cfg: WeightConfig, region=None) -> list[frozenset]:
    """Independent wall enumeration: vertex sets of ``conv(s) ∩ region``.

    Candidate points are intersections of affine hulls of weight subsets with
    flats cut out by region facets; membership is decided by the LP route.
    """
    region = as_region(cfg, region)
    r = cfg.rank
    facets = list(region.facets)
    found = set()
    for s in degenerate_supports(cfg):
        cands = set()
        for k in range(1, min(len(s), r) + 1):
            for t in itertools.combinations(s, k):
                base = cfg.weights[t[0]]
                dirs = [tuple(a - b for a, b in zip(cfg.weights[i], base)) for i in t[1:]]
                if dirs and rank(dirs) != len(dirs):
                    continue
                need = len(dirs)
                for fs in itertools.combinations(facets, need):
                    # x = base + sum c_m dirs_m, with a.x = b for the chosen facets
                    rows = [[dot(f[:-1], d) for d in dirs] for f in fs]
                    rhs = [f[-1] - dot(f[:-1], base) for f in fs]
                    if dirs:
                        if rank(rows) != len(dirs):
                            continue
                        red, piv = rref([row + [b] for row, b in zip(rows, rhs)], len(dirs) + 1)
                        if len(dirs) in piv:
                            continue
                        c = [ZERO] * len(dirs)
                        for row, pc in zip(red, piv):
                            c[pc] = row[-1]
                        x = tuple(base[m] + sum((c[q] * dirs[q][m] for q in range(len(dirs))), ZERO) for m in range(r))
                    else:
                        if any(v != 0 for v in rhs):
                            continue
                        x = base
                    if region.contains(x) and is_semistable(cfg, s, x):
                        cands.add(x)
        if cands:
            found.add(frozenset(Polytope.from_points(cands).vertices))
    return sorted(found, key=lambda f: sorted(f))


# ---------------------------------------------------------------------------
# chambers


def fingerprint(cfg: WeightConfig, lam, supports: Sequence[Support] | None = None) -> tuple[Support, ...]:
    """Supports semistable at ``lam`` (LP route), in canonical order."""
    supports = cfg.supports() if supports is None else supports
    return tuple(s for s in supports if is_semistable(cfg, s, lam))


def stable_fingerprint(cfg: WeightConfig, lam, supports: Sequence[Support] | None = None) -> tuple[Support, ...]:
    supports = cfg.supports() if supports is None else supports
    return tuple(s for s in supports if is_stable(cfg, s, lam))


def fingerprint_hash(fp: Sequence[Support]) -> str:
    payload = json.dumps([list(s) for s in fp], separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class Chamber:
    representative: Point
    fingerprint: tuple[Support, ...]
    cells: list[int]

    @property
    def fingerprint_hash(self) -> str:
        return fingerprint_hash(self.fingerprint)

    def to_json(self, full: bool = False) -> dict:
        out = {
            "representative": [fmt(x) for x in self.representative],
            "fingerprint": self.fingerprint_hash,
            "n_semistable": len(self.fingerprint),
        }
        if full:
            out["supports"] = [list(s) for s in self.fingerprint]
        return out


@dataclass
class ChamberDecomposition:
    cfg: WeightConfig
    region: Polytope
    walls: list[WallPiece]
    hyperplanes: list[tuple]
    cells: list[Cell]
    cell_signs: list[tuple[int, ...]]
    cell_chamber: list[int]
    chambers: list[Chamber]

    def on_wall(self, lam) -> bool:
        lam = _vec(lam)
        return any(w.contains(lam) for w in self.walls)

    def locate(self, lam) -> int | None:
        """Chamber index of ``lam``; ``-1`` on a wall, ``None`` outside the region."""
        lam = _vec(lam)
        if not self.region.contains(lam):
            return None
        if self.on_wall(lam):
            return -1
        sv = sign_vector(lam, self.hyperplanes)
        hits = {
            self.cell_chamber[i]
            for i, cs in enumerate(self.cell_signs)
            if all(a == 0 or a == b for a, b in zip(sv, cs)) and _cell_closure_contains(self.cells[i], lam)
        }
        if len(hits) != 1:
            raise AssertionError(f"point meets {len(hits)} chambers off the walls")
        return hits.pop()

    def sample_chamber(self, index: int, rng, max_tries: int = 100) -> Point:
        """Random rational point of a chamber that avoids every wall."""
        ch = self.chambers[index]
        for _ in range(max_tries):
            cell = self.cells[ch.cells[int(rng.integers(len(ch.cells)))]]
            pts = cell.points()
            wts = [Fraction(int(rng.integers(1, 50))) for _ in pts]
            tot = sum(wts)
            x = tuple(sum(w * p[k] for w, p in zip(wts, pts)) / tot for k in range(self.cfg.rank))
            if not self.on_wall(x):
                return x
        raise AssertionError("could not sample off the walls")

    def to_json(self, full: bool = False) -> dict:
        return {
            "config": self.cfg.to_json(),
            "region": {
                "inequalities": [list(f) for f in self.region.facets],
                "vertices": [[fmt(x) for x in v] for v in self.region.vertices],
            },
            "walls": [w.to_json() for w in self.walls],
            "chambers": [c.to_json(full) for c in self.chambers],
        }


def _cell_closure_contains(cell: Cell, x) -> bool:
    return all(dot(a, x) <= b for a, b in cell.constraints)


def _avoid_walls(point: Point, cell: Cell, wall_list: Sequence[WallPiece]) -> Point:
    if not any(w.contains(point) for w in wall_list):
        return point
    for v in cell.points():
        for t in (Fraction(1, 7), Fraction(1, 11), Fraction(1, 13), Fraction(2, 17)):
            x = tuple(a + t * (b - a) for a, b in zip(point, v))
            if not any(w.contains(x) for w in wall_list):
                return x
    raise AssertionError("cell representative stuck on walls")


def _dedupe_rows(rows) -> list[tuple]:
    return sorted(set(rows))


def chambers(cfg: WeightConfig, region=None, max_rank: int = 3) -> ChamberDecomposition:
    """Connected components of ``region`` minus the walls.

    The region is cut by the hyperplanes of codimension-one walls and by
    hyperplanes through their relative boundaries, so every cell facet is
    either inside a wall or disjoint from its relative interior. Cells sharing
    a facet that is not covered by a wall are merged.
    """
    if cfg.rank > max_rank:
        raise CapabilityError(f"exact chamber subdivision is limited to rank <= {max_rank}")
    region = as_region(cfg, region)
    r = cfg.rank
    wall_list = walls(cfg, region)
    codim1 = [w for w in wall_list if w.dim == r - 1]
    hyps = set()
    on_hyp: dict[tuple, list[WallPiece]] = {}
    for w in codim1:
        h = hyperplane_of(w.polytope)
        hyps.add(h)
        on_hyp.setdefault(h, []).append(w)
        for aux in relative_facet_hyperplanes(w.polytope):
            hyps.add(aux)
    hyperplanes = _dedupe_rows(hyps)
    cells = split_region(region, hyperplanes)
    signs = [sign_vector(c.centroid(), hyperplanes) for c in cells]
    parent = list(range(len(cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(cells)), 2):
        diff = [k for k, (a, b) in enumerate(zip(signs[i], signs[j])) if a != b]
        if len(diff) != 1:
            continue
        h = hyperplanes[diff[0]]
        shared = [v for v in cells[i].points() if dot(h[:-1], v) == h[-1]]
        if len(shared) < r:
            continue
        mid = tuple(sum(c) / len(shared) for c in zip(*shared))
        if any(w.contains(mid) for w in on_hyp.get(h, [])):
            continue
        parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(len(cells)):
        groups.setdefault(find(i), []).append(i)
    comps = sorted(groups.values(), key=lambda g: min(cells[i].centroid() for i in g))
    supports = cfg.supports()
    cell_chamber = [0] * len(cells)
    chamber_list = []
    for idx, comp in enumerate(comps):
        comp = sorted(comp, key=lambda i: cells[i].centroid())
        for i in comp:
            cell_chamber[i] = idx
        first = cells[comp[0]]
        rep = _avoid_walls(first.centroid(), first, wall_list)
        chamber_list.append(Chamber(rep, fingerprint(cfg, rep, supports), comp))
    return ChamberDecomposition(cfg, region, wall_list, hyperplanes, cells, signs, cell_chamber, chamber_list)


# ---------------------------------------------------------------------------
# finiteness census


def lattice_grid(region: Polytope, total: int = 10_000) -> list[Point]:
    """Regular rational grid over the bounding box of ``region`` (points inside it)."""
    r = region.ambient_dim
    k = max(2, math.ceil(total ** (1.0 / r)))
    lo = [min(v[i] for v in region.vertices) for i in range(r)]
    hi = [max(v[i] for v in region.vertices) for i in range(r)]
    axes = [[lo[i] + (hi[i] - lo[i]) * Fraction(j, k - 1) for j in range(k)] for i in range(r)]
    return [p for p in itertools.product(*axes) if region.contains(p)]


def membership_matrix(cfg: WeightConfig, points: Sequence[Point], supports: Sequence[Support]) -> np.ndarray:
    """Boolean ``(len(supports), len(points))``: ``points[j]`` in the hull of ``supports[i]``.

    Uses the integer H-representation of each hull, vectorised over points.
    """
    if not points:
        return np.zeros((len(supports), 0), dtype=bool)
    q = 1
    for p in points:
        for v in p:
            q = math.lcm(q, v.denominator)
    ints = np.array([[int(v * q) for v in p] for p in points], dtype=object)
    big = int(np.abs(ints).max()) if ints.size else 0
    dtype = np.int64 if big < 2**40 else object
    x = ints.astype(dtype)
    cache: dict[tuple, np.ndarray] = {}
    out = np.zeros((len(supports), len(points)), dtype=bool)
    for i, s in enumerate(supports):
        hull = cfg.hull(s)
        key = hull.canonical_key()
        row = cache.get(key)
        if row is None:
            row = np.ones(len(points), dtype=bool)
            for e in hull.equalities:
                a = np.array(e[:-1], dtype=dtype)
                row &= (x @ a) == e[-1] * q
            for f in hull.facets:
                a = np.array(f[:-1], dtype=dtype)
                row &= (x @ a) <= f[-1] * q
            cache[key] = row
        out[i] = row
    return out


@dataclass(frozen=True)
class CensusResult:
    n_points: int
    count: int
    c_class_count: int
    vertex_set_count: int
    unions_of_classes: bool

    @property
    def within_c_class_bound(self) -> bool:
        return self.count <= self.c_class_count

    @property
    def within_power_bound(self) -> bool:
        return self.count <= 2 ** self.c_class_count


def finiteness_census(cfg: WeightConfig, grid: Sequence[Sequence]) -> CensusResult:
    """Distinct semistable fingerprints over a finite grid of levels."""
    points = [_vec(p) for p in grid]
    supports = cfg.supports()
    mem = membership_matrix(cfg, points, supports)
    cols = np.packbits(mem.T, axis=1) if mem.size else np.zeros((0, 1), dtype=np.uint8)
    count = len({bytes(c) for c in cols})
    classes: dict[Support, list[int]] = {}
    for i, s in enumerate(supports):
        classes.setdefault(sh_set(cfg, s), []).append(i)
    vertex_sets = {cfg.hull(s).vertices for s in supports}
    unions = all(bool(np.all(mem[idx] == mem[idx[0]])) for idx in map(list, classes.values()))
    return CensusResult(len(points), count, len(classes), len(vertex_sets), unions)


# ---------------------------------------------------------------------------
# representation weight data and the non-abelian probe


def config_from_irrep(rs, weights: Sequence[tuple[Sequence, int]]) -> tuple[WeightConfig, list[Point]]:
    """Weight configuration of ``P(V)`` for a representation with the given weights.

    The fixed line of weight ``mu`` has moment image ``-mu`` (the torus acts on
    the fundamental spaces with weight ``-varpi``), so this is the one place
    where weights change sign. Coordinates are fundamental-weight coordinates
    with the Gram matrix ``(varpi_i, varpi_j)``.
    """
    frame = [tuple(to_fraction(x) for x in w) for w, _ in weights]
    mults = [int(m) for _, m in weights]
    coords = [tuple(-c for c in rs.to_omega(w)) for w in frame]
    gram = [[rs.inner(a, b) for b in rs.fundamental_weights] for a in rs.fundamental_weights]
    return WeightConfig(rs.rank, coords, mults, gram), frame


@dataclass(frozen=True)
class ProbeResult:
    status: str  # "certified-unstable" | "undetermined" | "semistable"
    witness: dict | None = None


def nonabelian_ss_probe(rs, weights, s: Support, lam, rng=None, n_directions: int = 64) -> ProbeResult:
    """One-sided semistability probe for a ``K``-representation.

    Checks torus semistability of every Weyl conjugate of the point class and
    of random one-parameter directions. A failure is a certificate of
    instability; success proves nothing. With ``rs=None`` the group is the
    torus itself and the answer is exact.
    """
    if rs is None:
        cfg = weights if isinstance(weights, WeightConfig) else WeightConfig(len(weights[0][0]), [w for w, _ in weights], [m for _, m in weights])
        ok = is_semistable(cfg, s, lam)
        if ok:
            return ProbeResult("semistable")
        sep = cfg.hull(s).violated_row(_vec(lam))
        return ProbeResult("certified-unstable", {"weyl": None, "separating_row": list(sep[1])})
    cfg, frame = config_from_irrep(rs, weights)
    s = check_support(cfg, s)
    lam_c = _vec(lam)
    if len(lam_c) != cfg.rank:
        raise DomainError("lambda must be given in fundamental-weight coordinates")
    lam_frame = rs.from_omega(lam_c)
    for g in rs.weyl_group.elements:
        if WeylGroup.act(g, lam_frame) != lam_frame:
            raise DomainError("lambda must be Weyl-invariant for the non-abelian probe")
    index = {w: i for i, w in enumerate(frame)}
    for k, g in enumerate(rs.weyl_group.elements):
        moved = tuple(sorted(index[WeylGroup.act(g, frame[i])] for i in s))
        if not is_semistable(cfg, moved, lam_c):
            _, row, _ = cfg.hull(moved).violated_row(lam_c)
            direction = _dual_to_direction(cfg, list(row[:-1]))
            if lambda_fn_exact(cfg, moved, lam_c, direction) >= 0:
                direction = _dual_to_direction(cfg, [-x for x in row[:-1]])
            value = lambda_fn_exact(cfg, moved, lam_c, direction)
            assert value < 0
            return ProbeResult("certified-unstable", {
                "weyl_index": k, "support": list(moved),
                "direction": [fmt(x) for x in direction], "lambda_value": fmt(value)})
        if rng is not None:
            for _ in range(n_directions):
                w = tuple(Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 6))) for _ in range(cfg.rank))
                if any(w) and lambda_fn_exact(cfg, moved, lam_c, w) < 0:
                    return ProbeResult("certified-unstable", {
                        "weyl_index": k, "support": list(moved),
                        "direction": [fmt(x) for x in w],
                        "lambda_value": fmt(lambda_fn_exact(cfg, moved, lam_c, w))})
    return ProbeResult("undetermined")
