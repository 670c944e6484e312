"""Weight-level constructions on the master space.

Everything here lives in fundamental-weight coordinates: a vector ``x`` stands
for ``sum_i x[i] * varpi_{i+1}``, so pairings with simple coroots are just the
coordinates. The ambient space is modelled only through moment values; the
factor ``pi`` is absorbed into the squared norms ``s_i = pi |u_i|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import ONE, ZERO, fmt, inverse, lp_standard, rank, to_fraction
from .errors import ConfigurationError, DomainError, PreconditionError
from .geometry import Polytope
from .vgit import ChamberDecomposition, WeightConfig, chambers, fingerprint

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class SimplexParam:
    """A point ``t`` of the standard simplex with ``r + 1`` coordinates."""

    t: Point

    def __post_init__(self):
        t = tuple(to_fraction(x) for x in self.t)
        if len(t) < 2:
            raise DomainError("simplex parameter needs at least two coordinates")
        if any(x < 0 for x in t):
            raise DomainError("simplex coordinates must be non-negative")
        if sum(t) != 1:
            raise DomainError(f"simplex coordinates sum to {fmt(sum(t))}, not 1")
        object.__setattr__(self, "t", t)

    @property
    def rank(self) -> int:
        return len(self.t) - 1

    @classmethod
    def vertex(cls, r: int, i: int) -> "SimplexParam":
        return cls(tuple(ONE if k == i else ZERO for k in range(r + 1)))

    @classmethod
    def barycenter(cls, r: int) -> "SimplexParam":
        return cls(tuple(Fraction(1, r + 1) for _ in range(r + 1)))

    @classmethod
    def random(cls, rng, r: int, max_den: int = 60) -> "SimplexParam":
        raw = [int(x) for x in rng.integers(0, max_den, size=r + 1)]
        if sum(raw) == 0:
            raw[0] = 1
        tot = sum(raw)
        return cls(tuple(Fraction(x, tot) for x in raw))


@dataclass(frozen=True)
class EpsilonShift:
    """A strictly dominant fractional weight, stored in fundamental-weight coordinates."""

    eps: Point

    def __post_init__(self):
        e = tuple(to_fraction(x) for x in self.eps)
        if not e:
            raise DomainError("empty shift")
        if any(x <= 0 for x in e):
            raise DomainError("shift must pair positively with every simple coroot")
        object.__setattr__(self, "eps", e)

    @property
    def rank(self) -> int:
        return len(self.eps)

    @property
    def total(self) -> Fraction:
        return sum(self.eps, ZERO)

    @classmethod
    def uniform(cls, r: int, value) -> "EpsilonShift":
        return cls(tuple(to_fraction(value) for _ in range(r)))

    def to_frame(self, rs) -> Point:
        return rs.from_omega(self.eps)


def _coerce_eps(eps) -> EpsilonShift:
    return eps if isinstance(eps, EpsilonShift) else EpsilonShift(tuple(eps))


def _unit(r: int, i: int) -> Point:
    return tuple(ONE if k == i else ZERO for k in range(r))


@dataclass(frozen=True)
class MasterWeightData:
    """Torus weights of the lines ``C_0, ..., C_r`` and the shifted levels."""

    rank: int
    eps: EpsilonShift

    def varpi(self, i: int) -> Point:
        """``varpi_i`` with ``varpi_0 = 0``."""
        if not 0 <= i <= self.rank:
            raise DomainError(f"index {i} outside 0..{self.rank}")
        return tuple([ZERO] * self.rank) if i == 0 else _unit(self.rank, i - 1)

    @property
    def weights(self) -> list[Point]:
        """Weight ``-varpi_i`` of the torus on ``C_i``."""
        return [tuple(-x for x in self.varpi(i)) for i in range(self.rank + 1)]

    @property
    def shifted_levels(self) -> list[Point]:
        """``varpi_i + eps``: the level reached at the vertex ``e_i`` of the simplex."""
        return [tuple(a + b for a, b in zip(self.varpi(i), self.eps.eps)) for i in range(self.rank + 1)]

    @property
    def exponents(self) -> list[list[Fraction]]:
        return phi_map(self.rank)


def master_weight_data(r: int, eps) -> MasterWeightData:
    eps = _coerce_eps(eps)
    if eps.rank != r:
        raise DomainError(f"shift has {eps.rank} coordinates, expected {r}")
    return MasterWeightData(r, eps)


def phi_map(r: int) -> list[list[Fraction]]:
    """Exponents of ``z_1..z_r`` in each coordinate of ``(eta, eta/z_1, ..., eta/z_r)``.

    ``eta = (z_1 ... z_r)^(1/(r+1))``; every column sums to zero because the
    coordinates multiply to one.
    """
    if r < 1:
        raise DomainError("rank must be at least 1")
    base = Fraction(1, r + 1)
    rows = [[base] * r]
    for i in range(r):
        rows.append([base - (1 if j == i else 0) for j in range(r)])
    return rows


def moment_shift(t, eps) -> Point:
    """Level ``sum_i t_i (varpi_i + eps)`` of the master-space quotient."""
    t = t if isinstance(t, SimplexParam) else SimplexParam(tuple(t))
    eps = _coerce_eps(eps)
    if eps.rank != t.rank:
        raise DomainError("simplex and shift ranks differ")
    return tuple(t.t[i + 1] + eps.eps[i] for i in range(t.rank))


def _check_s(s: Sequence) -> tuple[Fraction, ...]:
    s = tuple(to_fraction(x) for x in s)
    if any(x < 0 for x in s):
        raise DomainError("squared norms must be non-negative")
    if sum(s, ZERO) >= 1:
        raise PreconditionError("sum of s must be < 1 for the rescaling to exist")
    return s


def torus_part_E(s: Sequence) -> Point:
    """Torus part of the K-moment of ``u`` on ``E^N``: ``-sum s_i varpi_i``."""
    return tuple(-to_fraction(x) for x in s)


def torus_part_projective(s_prime: Sequence) -> Point:
    """Same quantity after the inclusion into ``P(C_0 + E^N)`` with ``u_0`` normalised."""
    s_prime = tuple(to_fraction(x) for x in s_prime)
    scale = ONE / (ONE + sum(s_prime, ZERO))
    return tuple(-scale * x for x in s_prime)


def rescale(s: Sequence) -> tuple[Fraction, ...]:
    """``s' = s / (1 - sum s)``."""
    s = _check_s(s)
    d = ONE - sum(s, ZERO)
    return tuple(x / d for x in s)


def rescale_identity_check(s: Sequence) -> bool:
    """Exact check that rescaling by ``z`` matches the two moment formulas."""
    s = _check_s(s)
    sp = rescale(s)
    lhs = torus_part_E(s)
    rhs = torus_part_projective(sp)
    scale = ONE / (ONE + sum(sp, ZERO))
    return lhs == rhs and all(scale * a == b for a, b in zip(sp, s))


# pi > 333/106 gives a rational upper bound for 1/sqrt(2 pi r)
_PI_LOWER = Fraction(333, 106)


def scale_bound(r: int, digits: int = 6) -> Fraction:
    """Rational ``beta >= 1/sqrt(2 pi r)``, slightly above the true value.

    Over-approximating the range of the ambient moment map keeps the
    certificate sound: the modelled range contains the true one.
    """
    if r < 1:
        raise DomainError("rank must be at least 1")
    target = 1 / (2 * _PI_LOWER * r)  # >= 1/(2 pi r)
    # round sqrt(target) up on a 10^-digits grid and confirm the square
    den = 10**digits
    num = math.isqrt(target.numerator * den * den // target.denominator) + 1
    beta = Fraction(num, den)
    while beta * beta < target:
        beta += Fraction(1, den)
    return beta


@dataclass(frozen=True)
class BoundaryCertificate:
    rank: int
    beta: Fraction
    feasible: bool

    @property
    def nonvanishing(self) -> bool:
        return not self.feasible


def boundary_lp(r: int, eps, beta: Fraction | None = None) -> BoundaryCertificate:
    """Decide whether ``m + eps - sum c_i varpi_i`` can vanish.

    ``m`` ranges over the simplex spanned by ``0`` and ``beta * varpi_i`` and
    ``c`` over convex coefficients. Variables are ``a`` (simplex weights of
    ``m``), a slack for ``sum a <= 1``, and ``c``.
    """
    eps = _coerce_eps(eps)
    beta = scale_bound(r) if beta is None else to_fraction(beta)
    n = 2 * r + 1
    rows, rhs = [], []
    for i in range(r):
        row = [ZERO] * n
        row[i] = -beta
        row[r + 1 + i] = ONE
        rows.append(row)
        rhs.append(eps.eps[i])
    rows.append([ONE] * r + [ONE] + [ZERO] * r)
    rhs.append(ONE)
    rows.append([ZERO] * (r + 1) + [ONE] * r)
    rhs.append(ONE)
    res = lp_standard([ZERO] * n, rows, rhs)
    return BoundaryCertificate(r, beta, res.feasible)


def boundary_nonvanishing_check(r: int, eps) -> bool:
    """True iff the shifted moment map has no zero on the boundary stratum.

    A shift that is not strictly dominant is not a valid polarisation and
    returns False. A shift at least as large as the moment scale bound is not
    small and raises :class:`PreconditionError`.
    """
    e = tuple(to_fraction(x) for x in (eps.eps if isinstance(eps, EpsilonShift) else eps))
    if len(e) != r:
        raise DomainError(f"shift has {len(e)} coordinates, expected {r}")
    if any(x <= 0 for x in e):
        return False
    beta = scale_bound(r)
    if sum(e, ZERO) > beta:
        raise PreconditionError(f"shift total {fmt(sum(e))} exceeds the moment scale bound {fmt(beta)}")
    return boundary_lp(r, EpsilonShift(e), beta).nonvanishing


@dataclass
class SimplexDecomposition:
    """Chambers of the simplex pulled back along ``t -> lambda(t)``."""

    source_cfg: WeightConfig
    eps: EpsilonShift
    omega: tuple[Point, ...]
    pulled: ChamberDecomposition

    @property
    def rank(self) -> int:
        return self.eps.rank

    def lam(self, t) -> Point:
        """Image of ``t`` (either ``r`` or ``r + 1`` coordinates) in the source frame."""
        t = tuple(to_fraction(x) for x in t)
        if len(t) == self.rank + 1:
            t = SimplexParam(t).t[1:]
        eps = _omega_apply(self.omega, self.eps.eps)
        step = _omega_apply(self.omega, t)
        return tuple(a + b for a, b in zip(eps, step))

    def fingerprint_at(self, t) -> tuple:
        t = tuple(to_fraction(x) for x in t)
        if len(t) == self.rank + 1:
            t = t[1:]
        return fingerprint(self.pulled.cfg, t)

    @property
    def walls(self):
        return self.pulled.walls

    @property
    def chambers(self):
        return self.pulled.chambers


def _omega_apply(omega: Sequence[Point], x: Sequence) -> Point:
    r = len(omega[0])
    return tuple(sum((x[i] * omega[i][k] for i in range(len(x))), ZERO) for k in range(r))


def chamber_transport(dec, eps, omega: Sequence[Sequence] | None = None) -> SimplexDecomposition:
    """Pull a chamber decomposition of weight space back to the parameter simplex.

    ``dec`` is a :class:`ChamberDecomposition` (or a bare :class:`WeightConfig`)
    whose coordinates express ``varpi_i`` as the rows of ``omega`` (identity by
    default, i.e. fundamental-weight coordinates). The simplex is parametrised
    by ``(t_1, ..., t_r)`` with ``t_0 = 1 - sum``; walls and chambers are
    recomputed on that simplex for the pulled-back weights, so fingerprints
    agree pointwise with the source.
    """
    cfg = dec.cfg if isinstance(dec, ChamberDecomposition) else dec
    if not isinstance(cfg, WeightConfig):
        raise ConfigurationError("expected a ChamberDecomposition or WeightConfig")
    eps = _coerce_eps(eps)
    r = cfg.rank
    if eps.rank != r:
        raise ConfigurationError("shift rank does not match the configuration")
    if omega is None:
        omega = [_unit(r, i) for i in range(r)]
    omega = tuple(tuple(to_fraction(x) for x in row) for row in omega)
    if len(omega) != r or any(len(row) != r for row in omega):
        raise ConfigurationError("omega must be an r x r matrix")
    # affine independence of varpi_i + eps (i = 0..r) means the varpi_i are independent
    if rank([list(row) for row in omega]) != r:
        raise ConfigurationError("the shifted levels varpi_i + eps are affinely dependent")
    eps_src = _omega_apply(omega, eps.eps)
    # lambda(t) = eps_src + t @ omega; pull weights back through the inverse
    inv = inverse([list(row) for row in omega])
    pulled_w = []
    for w in cfg.weights:
        d = [a - b for a, b in zip(w, eps_src)]
        pulled_w.append(tuple(sum((d[k] * inv[k][i] for k in range(r)), ZERO) for i in range(r)))
    g = cfg.gram
    gram = tuple(
        tuple(sum((omega[i][a] * g[a][b] * omega[j][b] for a in range(r) for b in range(r)), ZERO) for j in range(r))
        for i in range(r)
    )
    pulled_cfg = WeightConfig(r, tuple(pulled_w), cfg.mults, gram)
    simplex = [tuple([ZERO] * r)] + [_unit(r, i) for i in range(r)]
    region = Polytope.from_points(simplex)
    return SimplexDecomposition(cfg, eps, omega, chambers(pulled_cfg, region))
