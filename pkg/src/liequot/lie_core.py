"""Root systems, Weyl chamber faces and weight multiplicities over the rationals.

Vectors of t* live in an orthonormal-style coordinate frame: type A_r uses
R^{r+1} (roots e_i - e_{i+1}, the sum-zero hyperplane), the classical series
B, C, D use R^r. The invariant form is ``u @ gram @ v`` with long roots of
squared length 2.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from ._exact import ONE, ZERO, inverse, solve, to_fraction
from .errors import CapabilityError, ConfigurationError, DomainError

Vector = tuple[Fraction, ...]

SUPPORTED_SERIES = ("A",)
EXPERIMENTAL_SERIES = ("B", "C", "D")
MAX_RANK = 4


def _vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def _add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def _unit(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def _classical_data(series: str, rank: int):
    """Simple roots and the diagonal of the frame Gram matrix."""
    if series == "A":
        n = rank + 1
        roots = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(rank)]
        return roots, [ONE] * n
    n = rank
    head = [_sub(_unit(n, i), _unit(n, i + 1)) for i in range(rank - 1)]
    if series == "B":
        return head + [_unit(n, n - 1)], [ONE] * n
    if series == "C":
        return head + [_scale(2, _unit(n, n - 1))], [Fraction(1, 2)] * n
    if series == "D":
        return head + [_add(_unit(n, n - 2), _unit(n, n - 1))], [ONE] * n
    raise ConfigurationError(f"unknown series {series!r}")


@dataclass(frozen=True)
class RootSystem:
    """Root datum of a compact simply connected group of classical type."""

    series: str
    rank: int
    simple_roots: tuple[Vector, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[Vector, ...] = field(repr=False)
    cartan_matrix: tuple[tuple[int, ...], ...] = field(repr=False)
    fundamental_weights: tuple[Vector, ...] = field(repr=False)

    @property
    def type_label(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def frame_dim(self) -> int:
        return len(self.gram)

    @property
    def roots(self) -> tuple[Vector, ...]:
        return self.positive_roots + tuple(_scale(-1, a) for a in self.positive_roots)

    @property
    def dim_k(self) -> int:
        return self.rank + 2 * len(self.positive_roots)

    @cached_property
    def rho(self) -> Vector:
        return tuple(sum(c) for c in zip(*self.fundamental_weights))

    def inner(self, u: Sequence, v: Sequence) -> Fraction:
        return sum((u[i] * self.gram[i][i] * v[i] for i in range(len(u))), ZERO)

    def pairing(self, lam: Sequence, alpha: Sequence) -> Fraction:
        """``<lam, alpha^vee> = 2 (lam, alpha) / (alpha, alpha)``."""
        return 2 * self.inner(lam, alpha) / self.inner(alpha, alpha)

    def simple_pairings(self, lam: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.pairing(lam, a) for a in self.simple_roots)

    def to_omega(self, lam: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of ``lam`` in the fundamental-weight basis."""
        return self.simple_pairings(_vec(lam))

    def from_omega(self, coeffs: Sequence) -> Vector:
        out = tuple(ZERO for _ in range(self.frame_dim))
        for c, w in zip(coeffs, self.fundamental_weights):
            out = _add(out, _scale(to_fraction(c), w))
        return out

    def in_weight_space(self, lam: Sequence) -> bool:
        """Whether ``lam`` lies in the span of the simple roots."""
        return tuple(lam) == self.from_omega(self.to_omega(lam))

    def is_root(self, v: Sequence) -> bool:
        return tuple(v) in self._root_set

    @cached_property
    def _root_set(self) -> frozenset:
        return frozenset(self.roots)

    def simple_coefficients(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coefficients of ``v`` in the simple-root basis."""
        m = [[self.inner(a, b) for b in self.simple_roots] for a in self.simple_roots]
        rhs = [self.inner(a, v) for a in self.simple_roots]
        return tuple(solve(m, rhs))

    def reflect(self, v: Sequence, alpha: Sequence) -> Vector:
        return _sub(v, _scale(self.pairing(v, alpha), alpha))

    @cached_property
    def weyl_group(self) -> "WeylGroup":
        return WeylGroup.generate(self)

    @cached_property
    def longest_element(self) -> tuple[tuple[Fraction, ...], ...]:
        """The Weyl element sending the dominant chamber to its negative."""
        rho = self.rho
        neg = _scale(-1, rho)
        for g in self.weyl_group.elements:
            if WeylGroup.act(g, rho) == neg:
                return g
        raise AssertionError("no longest element found")


@dataclass(frozen=True)
class WeylGroup:
    """Finite reflection group as exact matrices on the frame coordinates."""

    elements: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    @staticmethod
    def reflection_matrix(rs: RootSystem, alpha: Sequence) -> tuple[tuple[Fraction, ...], ...]:
        n = rs.frame_dim
        cols = [rs.reflect(_unit(n, j), alpha) for j in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    @staticmethod
    def act(g, v: Sequence) -> Vector:
        return tuple(sum((gi[j] * v[j] for j in range(len(v))), ZERO) for gi in g)

    @staticmethod
    def compose(g, h):
        n = len(g)
        return tuple(
            tuple(sum((g[i][k] * h[k][j] for k in range(n)), ZERO) for j in range(n))
            for i in range(n)
        )

    @classmethod
    def generate(cls, rs: RootSystem) -> "WeylGroup":
        gens = [cls.reflection_matrix(rs, a) for a in rs.simple_roots]
        n = rs.frame_dim
        ident = tuple(_unit(n, i) for i in range(n))
        seen = {ident}
        order = [ident]
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in gens:
                h = cls.compose(s, g)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    queue.append(h)
        return cls(tuple(order))

    def orbit(self, v: Sequence) -> list[Vector]:
        seen: dict[Vector, None] = {}
        for g in self.elements:
            seen.setdefault(self.act(g, v), None)
        return list(seen)


def _root_closure(simple: Sequence[Vector], reflect) -> list[Vector]:
    found = {tuple(a) for a in simple}
    queue = deque(found)
    while queue:
        b = queue.popleft()
        for a in simple:
            c = reflect(b, a)
            if c not in found:
                found.add(c)
                queue.append(c)
    return list(found)


@lru_cache(maxsize=None)
def _build(series: str, rank: int) -> RootSystem:
    simple, diag = _classical_data(series, rank)
    n = len(diag)
    gram = tuple(tuple(diag[i] if i == j else ZERO for j in range(n)) for i in range(n))

    def inner(u, v):
        return sum((u[i] * diag[i] * v[i] for i in range(n)), ZERO)

    def reflect(v, a):
        c = 2 * inner(v, a) / inner(a, a)
        return tuple(x - c * y for x, y in zip(v, a))

    cartan = tuple(
        tuple(int(2 * inner(a, b) / inner(b, b)) for b in simple) for a in simple
    )
    cm = [[Fraction(c) for c in row] for row in cartan]
    # <w_i, a_j^vee> = sum_k c_ik cartan[k][j] = delta_ij
    coeff = inverse(cm)
    fund = []
    for i in range(rank):
        w = tuple(ZERO for _ in range(n))
        for k in range(rank):
            w = _add(w, _scale(coeff[i][k], simple[k]))
        fund.append(w)
    all_roots = _root_closure(simple, reflect)
    sgram = [[inner(a, b) for b in simple] for a in simple]
    positive = []
    for b in all_roots:
        c = solve(sgram, [inner(a, b) for a in simple])
        if all(x >= 0 for x in c):
            positive.append((sum(c), tuple(-x for x in c), b))
    positive.sort()
    return RootSystem(
        series=series,
        rank=rank,
        simple_roots=tuple(simple),
        gram=gram,
        positive_roots=tuple(p[2] for p in positive),
        cartan_matrix=cartan,
        fundamental_weights=tuple(fund),
    )


def build_root_system(series: str, rank: int, *, experimental: bool = False) -> RootSystem:
    """Root system of type ``series`` and ``rank``.

    Type A up to rank 4 is fully supported. B, C, D need ``experimental=True``
    and are only used by the Lie-theoretic tables, not by the matrix models.
    """
    series = str(series).upper()
    try:
        rank = int(rank)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"rank must be an integer, got {rank!r}") from exc
    if series not in SUPPORTED_SERIES + EXPERIMENTAL_SERIES:
        raise ConfigurationError(f"unsupported series {series!r}")
    if series in EXPERIMENTAL_SERIES and not experimental:
        raise CapabilityError(f"series {series} requires the experimental capability flag")
    if not 1 <= rank <= MAX_RANK:
        raise CapabilityError(f"rank {rank} outside the supported range 1..{MAX_RANK}")
    min_rank = {"A": 1, "B": 2, "C": 2, "D": 3}[series]
    if rank < min_rank:
        raise ConfigurationError(f"{series}{rank} is not a valid root system")
    return _build(series, rank)


def coroot(rs: RootSystem, alpha: Sequence) -> Vector:
    """The coroot of ``alpha`` as a frame vector ``c`` with ``<b, alpha^vee> = (b, c)``."""
    alpha = _vec(alpha)
    if not rs.is_root(alpha):
        raise DomainError(f"{alpha} is not a root of {rs.type_label}")
    return _scale(2 / rs.inner(alpha, alpha), alpha)


@dataclass(frozen=True)
class Face:
    """Face of the closed positive chamber, given by its vanishing set (0-based)."""

    vanishing_set: frozenset[int]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "vanishing_set", frozenset(int(i) for i in self.vanishing_set))
        if any(i < 0 or i >= self.rank for i in self.vanishing_set):
            raise ConfigurationError("vanishing set index out of range")

    @property
    def dim(self) -> int:
        return self.rank - len(self.vanishing_set)

    @property
    def is_interior(self) -> bool:
        return not self.vanishing_set

    def contains(self, rs: RootSystem, lam: Sequence) -> bool:
        p = rs.simple_pairings(_vec(lam))
        return rs.in_weight_space(lam) and all(
            (p[i] == 0) if i in self.vanishing_set else (p[i] > 0) for i in range(self.rank)
        )

    def sorted_set(self) -> list[int]:
        return sorted(self.vanishing_set)


def faces(rs: RootSystem) -> list[Face]:
    """All ``2^r`` faces, ordered by vanishing-set size then lexicographically."""
    out = []
    for k in range(rs.rank + 1):
        for comb in itertools.combinations(range(rs.rank), k):
            out.append(Face(frozenset(comb), rs.rank))
    return out


def face_of(rs: RootSystem, lam: Sequence) -> Face:
    lam = _vec(lam)
    if len(lam) != rs.frame_dim or not rs.in_weight_space(lam):
        raise DomainError("lambda is not a vector of t*")
    p = rs.simple_pairings(lam)
    if any(x < 0 for x in p):
        raise DomainError("lambda is not in the closed positive chamber")
    return Face(frozenset(i for i, x in enumerate(p) if x == 0), rs.rank)


def face_root_sets(rs: RootSystem, face: Face) -> tuple[list[Vector], list[int]]:
    """Roots vanishing on the whole face, and the simple ones among them."""
    gens = [rs.fundamental_weights[j] for j in range(rs.rank) if j not in face.vanishing_set]
    r_sigma = [a for a in rs.roots if all(rs.pairing(w, a) == 0 for w in gens)]
    s_sigma = [i for i, a in enumerate(rs.simple_roots) if a in r_sigma]
    return r_sigma, s_sigma


def positive_orbit_roots(rs: RootSystem, face: Face) -> list[Vector]:
    """``R_+ \\ R(sigma)``: positive roots that move the face."""
    r_sigma = set(face_root_sets(rs, face)[0])
    return [a for a in rs.positive_roots if a not in r_sigma]


def decomposition_dims(rs: RootSystem, face: Face) -> tuple[int, int]:
    """Dimensions of ``[k_sigma, k_sigma]`` and of its complement in ``k``."""
    r_sigma, s_sigma = face_root_sets(rs, face)
    pos_in = sum(1 for a in rs.positive_roots if a in set(r_sigma))
    semisimple = len(s_sigma) + 2 * pos_in
    rest = (rs.rank - len(s_sigma)) + 2 * (len(rs.positive_roots) - pos_in)
    return semisimple, rest


def random_point_in_face(rs: RootSystem, face: Face, rng, max_num: int = 9, max_den: int = 7) -> Vector:
    """Random rational point of the (relatively open) face."""
    coeffs = []
    for i in range(rs.rank):
        if i in face.vanishing_set:
            coeffs.append(ZERO)
        else:
            coeffs.append(Fraction(int(rng.integers(1, max_num + 1)), int(rng.integers(1, max_den + 1))))
    return rs.from_omega(coeffs)


# ---------------------------------------------------------------------------
# representations


def is_dominant_integral(rs: RootSystem, lam: Sequence) -> bool:
    p = rs.simple_pairings(lam)
    return rs.in_weight_space(lam) and all(x >= 0 and x.denominator == 1 for x in p)


def weyl_dimension(rs: RootSystem, lam: Sequence) -> int:
    lam = _vec(lam)
    lr = _add(lam, rs.rho)
    num = ONE
    for a in rs.positive_roots:
        num *= rs.inner(lr, a) / rs.inner(rs.rho, a)
    if num.denominator != 1:
        raise AssertionError("Weyl dimension is not an integer")
    return int(num)


def weights_of_irrep(rs: RootSystem, highest_weight: Sequence) -> list[tuple[Vector, int]]:
    """Weights of the irreducible module with the given highest weight.

    Multiplicities come from Freudenthal's recursion, filled level by level
    below the highest weight. Output is sorted by depth, then lexicographically.
    """
    lam = _vec(highest_weight)
    if len(lam) != rs.frame_dim or not is_dominant_integral(rs, lam):
        raise DomainError("highest weight must be dominant integral")
    rho = rs.rho
    lr = _add(lam, rho)
    top = rs.inner(lr, lr)
    pos = rs.positive_roots
    mult: dict[Vector, int] = {lam: 1}
    level = [lam]
    depth = 0
    ordered = [(0, lam)]
    while level:
        depth += 1
        candidates = sorted({_sub(mu, a) for mu in level for a in rs.simple_roots})
        nxt = []
        for mu in candidates:
            mr = _add(mu, rho)
            den = top - rs.inner(mr, mr)
            if den == 0:
                continue
            num = ZERO
            for a in pos:
                for k in range(1, depth + 1):
                    nu = _add(mu, _scale(k, a))
                    m = mult.get(nu, 0)
                    if m:
                        num += m * rs.inner(nu, a)
            m = 2 * num / den
            if m.denominator != 1:
                raise AssertionError("non-integral Freudenthal multiplicity")
            if m > 0:
                mult[mu] = int(m)
                nxt.append(mu)
                ordered.append((depth, mu))
        level = nxt
    return [(mu, mult[mu]) for _, mu in ordered]


def irrep_dimension(weights: Iterable[tuple[Vector, int]]) -> int:
    return sum(m for _, m in weights)
