"""Seeded verification suites shared by the CLI and the test-suite.

Each suite returns a :class:`SuiteResult` with the number of checked
instances and up to ``MAX_WITNESSES`` serialisable counterexamples.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from ._exact import fmt
from .implosion import (
    fundamental_rep_space,
    implosion_moment_check,
    implosion_pullback_gram,
    orbit_metric_matrix,
    predicted_orbit_gram,
    random_su_exact,
    random_su_float,
)
from .geometry import hyperplane_of
from .lie_core import build_root_system, face_of, faces, random_point_in_face, weights_of_irrep
from .master_space import rescale_identity_check
from .reduction import (
    Subspace,
    projection_composition_check,
    random_compatible_triple,
    random_isotropic_subspace,
    stages_norm_check,
)
from .vgit import (
    DirectionPool,
    WeightConfig,
    as_region,
    chambers,
    config_from_irrep,
    direction_pool,
    finiteness_census,
    fingerprint,
    is_semistable,
    is_stable,
    lattice_grid,
    m_function,
    m_sign,
    stable_fingerprint,
    walls,
    walls_bruteforce,
)

MAX_WITNESSES = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.checked > 0

    def fail(self, witness: dict) -> None:
        self.failures += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "witnesses": self.witnesses,
            "details": self.details,
        }
        if timing:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def wrapper(*args, **kwargs) -> SuiteResult:
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.elapsed = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _vec_json(v) -> list[str]:
    return [fmt(Fraction(x)) for x in v]


# ---------------------------------------------------------------------------
# random inputs


def random_weight_config(rng, rank: int, n: int, bound: int | None = None) -> WeightConfig:
    """``n`` distinct integer weights in a box of half-width ``bound``."""
    if bound is None:
        bound = max(2, math.ceil(n / 2)) if rank == 1 else 2
    if (2 * bound + 1) ** rank < n:
        raise ValueError("box too small for the requested number of weights")
    seen: list[tuple] = []
    while len(seen) < n:
        w = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=rank))
        if w not in seen:
            seen.append(w)
    mults = tuple(int(x) for x in rng.integers(1, 3, size=n))
    return WeightConfig(rank, tuple(seen), mults)


def random_levels(rng, cfg: WeightConfig, count: int) -> list[tuple[Fraction, ...]]:
    """Mix of generic points, weights, midpoints and centroids of triples.

    The special points land on walls and hull boundaries, where the sign
    decisions are hardest.
    """
    r = cfg.rank
    lo = [min(w[k] for w in cfg.weights) - 1 for k in range(r)]
    hi = [max(w[k] for w in cfg.weights) + 1 for k in range(r)]
    out = []
    for i in range(count):
        kind = i % 4
        if kind == 0:
            den = int(rng.integers(1, 12))
            out.append(tuple(Fraction(int(rng.integers(lo[k] * den, hi[k] * den + 1)), den) for k in range(r)))
        elif kind == 1:
            out.append(cfg.weights[int(rng.integers(cfg.n))])
        else:
            m = min(kind, cfg.n)
            idx = rng.choice(cfg.n, size=m, replace=False)
            out.append(tuple(sum(cfg.weights[j][k] for j in idx) / Fraction(m) for k in range(r)))
    return out


# ---------------------------------------------------------------------------
# suites


@_timed
def orbit_metric_suite(seed: int = 0, ranks=(1, 2, 3), per_face: int = 25) -> SuiteResult:
    """Pullback Gram equals the bracket Gram and the block-diagonal prediction, exactly."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("orbit-metric")
    for r in ranks:
        rs = build_root_system("A", r)
        frs = fundamental_rep_space(r + 1)
        for face in faces(rs):
            for _ in range(per_face):
                lam = random_point_in_face(rs, face, rng)
                pulled = implosion_pullback_gram(frs, lam, face)
                predicted = predicted_orbit_gram(rs, lam)
                bracket = orbit_metric_matrix(rs, lam)
                res.checked += 1
                if not (pulled == predicted == bracket):
                    res.fail({"rank": r, "face": face.sorted_set(), "lambda": _vec_json(lam)})
    res.details["ranks"] = list(ranks)
    return res


def _random_dominant(rng, rs, max_num: int = 9, max_den: int = 7):
    coeffs = [Fraction(int(rng.integers(0, max_num + 1)), int(rng.integers(1, max_den + 1))) for _ in range(rs.rank)]
    return rs.from_omega(coeffs)


@_timed
def moment_recovery_suite(
    seed: int = 0, ranks=(1, 2, 3), samples: int = 100, tolerance: float = 1e-9, exact_samples: int = 5
) -> SuiteResult:
    """Torus moment of ``F(k, lam)`` is ``lam`` and the K-moment is ``-k.lam``."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("moment-recovery")
    worst = 0.0
    for r in ranks:
        rs = build_root_system("A", r)
        frs = fundamental_rep_space(r + 1)
        for _ in range(samples):
            k = random_su_float(r + 1, rng)
            lam = _random_dominant(rng, rs)
            dev = implosion_moment_check(frs, k, lam).deviation()
            worst = max(worst, dev)
            res.checked += 1
            if not dev <= tolerance:
                res.fail({"rank": r, "lambda": _vec_json(lam), "deviation": dev})
        for _ in range(exact_samples):
            k = random_su_exact(r + 1, rng)
            lam = _random_dominant(rng, rs)
            res.checked += 1
            if not implosion_moment_check(frs, k, lam).exact_match():
                res.fail({"rank": r, "lambda": _vec_json(lam), "mode": "exact"})
    res.details["max_deviation"] = worst
    return res


def _isotropic_pair(rng, n: int, exact: bool):
    triple, frame = random_compatible_triple(rng, n, exact)
    total = int(rng.integers(1, n + 1))
    k1 = int(rng.integers(0, total + 1))
    iso = random_isotropic_subspace(rng, frame, total, exact)
    v = Subspace(2 * n, iso.basis[:, :k1]) if k1 else Subspace.zero(2 * n, exact)
    w = Subspace(2 * n, iso.basis[:, k1:]) if total - k1 else Subspace.zero(2 * n, exact)
    return triple, v, w


@_timed
def projection_lemma_suite(
    seed: int = 0,
    float_instances: int = 1000,
    exact_instances: int = 100,
    max_dim: int = 10,
    tolerance: float = 1e-10,
    swap_tolerance: float = 1e-9,
    max_exact_dim: int | None = None,
) -> SuiteResult:
    """Two-stage projection equals the one-step projection; stage order is irrelevant."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("projection-lemma")
    worst = worst_swap = 0.0
    max_exact_dim = max_dim if max_exact_dim is None else max_exact_dim
    for exact, count, top in ((False, float_instances, max_dim), (True, exact_instances, max_exact_dim)):
        for i in range(count):
            n = 1 + i % (top // 2)
            triple, v, w = _isotropic_pair(rng, n, exact)
            dev = projection_composition_check(triple.g, v, w)
            x = rng.integers(-5, 6, size=2 * n)
            vec = np.array([Fraction(int(a)) for a in x], dtype=object) if exact else x.astype(float)
            norms = stages_norm_check(triple, w, v, vec)
            res.checked += 1
            if exact:
                ok = dev == 0 and norms.direct_sq == norms.staged_sq == norms.swapped_sq
            else:
                swap = max(abs(norms.direct - norms.staged), abs(norms.direct - norms.swapped))
                worst = max(worst, float(dev))
                worst_swap = max(worst_swap, swap)
                ok = dev < tolerance and swap < swap_tolerance
            if not ok:
                res.fail({"dim": 2 * n, "exact": exact, "deviation": float(dev), "dims": [v.dim, w.dim]})
    res.details.update(max_float_deviation=worst, max_swap_deviation=worst_swap)
    return res


def default_oracle_configs(rng, max_weights: int = 8, max_rank: int = 3, per_rank: int = 4) -> list[WeightConfig]:
    """Random configurations; each rank gets one with the maximal weight count."""
    out = []
    for r in range(1, max_rank + 1):
        for j in range(per_rank):
            n = max_weights if j == 0 else int(rng.integers(2, max_weights + 1))
            out.append(random_weight_config(rng, r, n))
    return out


@_timed
def m_oracle_suite(
    seed: int = 0,
    configs: list[WeightConfig] | None = None,
    levels: int = 50,
    mutate: bool = False,
    max_weights: int = 8,
    max_rank: int = 3,
    per_rank: int = 4,
) -> SuiteResult:
    """LP membership, the hull sign of ``M`` and the ``d_rho`` sweep agree exactly.

    ``mutate`` flips the sign of ``M``; the suite must then fail.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("m-oracle")
    if configs is None:
        configs = default_oracle_configs(rng, max_weights, max_rank, per_rank)
    flip = -1 if mutate else 1
    counts = {"semistable": 0, "stable": 0}
    for ci, cfg in enumerate(configs):
        supports = cfg.supports()
        pool = DirectionPool(cfg, direction_pool(cfg, rng))
        for lam in random_levels(rng, cfg, levels):
            swept = pool.sweep_all(lam, supports)
            for s, sw in zip(supports, swept):
                ss = is_semistable(cfg, s, lam)
                st = is_stable(cfg, s, lam)
                m = flip * m_sign(cfg, s, lam)
                counts["semistable"] += ss
                counts["stable"] += st
                res.checked += 1
                if ss != (m <= 0) or st != (m < 0) or sw != m:
                    res.fail({
                        "config": cfg.to_json(),
                        "support": list(s),
                        "lambda": _vec_json(lam),
                        "semistable": ss,
                        "stable": st,
                        "m_sign": m,
                        "sweep_sign": sw,
                    })
    res.details.update(configs=len(configs), **counts)
    return res


@_timed
def convexity_suite(seed: int = 0, pairs: int = 1000, tolerance: float = 1e-9, n_configs: int = 20) -> SuiteResult:
    """Midpoint convexity of ``lam -> M(lam)``, with exact sign implications."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("convexity")
    configs = [
        random_weight_config(rng, int(rng.integers(1, 4)), int(rng.integers(1, 7))) for _ in range(n_configs)
    ]
    for _ in range(pairs):
        cfg = configs[int(rng.integers(len(configs)))]
        supports = cfg.supports()
        s = supports[int(rng.integers(len(supports)))]
        a, b = random_levels(rng, cfg, 4)[int(rng.integers(4))], random_levels(rng, cfg, 1)[0]
        mid = tuple((x + y) / 2 for x, y in zip(a, b))
        ma, mb, mm = (m_function(cfg, s, p) for p in (a, b, mid))
        ok = mm.value <= (ma.value + mb.value) / 2 + tolerance
        # exact consequences: convex sublevel sets {M <= 0} and {M < 0}
        if ma.sign <= 0 and mb.sign <= 0:
            ok &= mm.sign <= 0
        if ma.sign < 0 and mb.sign < 0:
            ok &= mm.sign < 0
        res.checked += 1
        if not ok:
            res.fail({
                "config": cfg.to_json(), "support": list(s),
                "lambda": _vec_json(a), "lambda_prime": _vec_json(b),
                "values": [ma.value, mb.value, mm.value],
            })
    return res


def rescale_grid(max_den: int = 16, max_rank: int = 3):
    """All ``s`` in ``(1/d) Z_{>=0}^r`` with ``sum(s) < 1``, ``d <= max_den``, ``r <= max_rank``."""
    seen = set()
    for r in range(1, max_rank + 1):
        for d in range(1, max_den + 1):
            for a in _compositions_below(d, r):
                s = tuple(Fraction(x, d) for x in a)
                if s not in seen:
                    seen.add(s)
                    yield s


def _compositions_below(total: int, parts: int):
    """Non-negative integer vectors of length ``parts`` with sum ``< total``."""
    if parts == 0:
        yield ()
        return
    for first in range(total):
        for rest in _compositions_below(total - first, parts - 1):
            yield (first,) + rest


@_timed
def rescale_identity_suite(seed: int = 0, max_den: int = 16, max_rank: int = 3, samples: int = 1000) -> SuiteResult:
    """The rescaling identity holds exactly on a rational grid and random samples."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("rescale-identity")
    grid = 0
    for s in rescale_grid(max_den, max_rank):
        grid += 1
        res.checked += 1
        if not rescale_identity_check(s):
            res.fail({"s": _vec_json(s)})
    for _ in range(samples):
        r = int(rng.integers(1, max_rank + 1))
        den = int(rng.integers(2, 1000))
        budget = int(rng.integers(0, den))
        cuts = sorted(int(x) for x in rng.integers(0, budget + 1, size=r - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [budget])]
        s = tuple(Fraction(p, den) for p in parts)
        res.checked += 1
        if not rescale_identity_check(s):
            res.fail({"s": _vec_json(s)})
    res.details["grid_points"] = grid
    return res


def random_small_configs(rng, count: int, max_rank: int = 2, max_weights: int = 5) -> list[WeightConfig]:
    out = []
    for _ in range(count):
        r = int(rng.integers(1, max_rank + 1))
        n = int(rng.integers(1, max_weights + 1))
        out.append(random_weight_config(rng, r, n))
    return out


@_timed
def chambers_suite(seed: int = 0, n_configs: int = 50, samples: int = 20, max_rank: int = 2,
                   max_weights: int = 5) -> SuiteResult:
    """Fingerprints are constant on chambers with semistable = stable; walls break that."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("chambers")
    n_ch = n_w = 0
    for cfg in random_small_configs(rng, n_configs, max_rank, max_weights):
        dec = chambers(cfg)
        supports = cfg.supports()
        for idx, ch in enumerate(dec.chambers):
            n_ch += 1
            res.checked += 1
            bad = None
            if stable_fingerprint(cfg, ch.representative, supports) != ch.fingerprint:
                bad = ch.representative
            for _ in range(samples):
                if bad is not None:
                    break
                lam = dec.sample_chamber(idx, rng)
                if fingerprint(cfg, lam, supports) != ch.fingerprint or stable_fingerprint(cfg, lam, supports) != ch.fingerprint:
                    bad = lam
            if bad is not None:
                res.fail({"config": cfg.to_json(), "chamber": idx, "lambda": _vec_json(bad)})
        for w in dec.walls:
            n_w += 1
            res.checked += 1
            lam = w.sample()
            zero = any(m_sign(cfg, s, lam) == 0 for s in supports)
            split = any(is_semistable(cfg, s, lam) != is_stable(cfg, s, lam) for s in supports)
            if not (zero and split):
                res.fail({"config": cfg.to_json(), "wall": w.to_json(), "lambda": _vec_json(lam)})
    res.details.update(chambers=n_ch, walls=n_w)
    return res


@_timed
def finiteness_suite(seed: int = 0, n_configs: int = 50, grid_size: int = 10_000, max_rank: int = 2,
                     max_weights: int = 5) -> SuiteResult:
    """Census against the C-class bound, and walls against a brute-force enumeration.

    The C-class bound is checked literally. ``details`` also records the two
    weaker statements that always hold: every fingerprint is a union of
    C-classes, so the count is at most ``2 ** classes``.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("finiteness")
    over = unions = power = wall_ok = 0
    for cfg in random_small_configs(rng, n_configs, max_rank, max_weights):
        region = as_region(cfg, None)
        census = finiteness_census(cfg, lattice_grid(region, grid_size))
        fast = sorted(tuple(sorted(w.polytope.vertices)) for w in walls(cfg, region))
        brute = sorted(tuple(sorted(v)) for v in walls_bruteforce(cfg, region))
        walls_match = fast == brute
        res.checked += 1
        unions += census.unions_of_classes
        power += census.within_power_bound
        wall_ok += walls_match
        if not census.within_c_class_bound:
            over += 1
        if not (census.within_c_class_bound and walls_match):
            res.fail({
                "config": cfg.to_json(),
                "fingerprints": census.count,
                "c_classes": census.c_class_count,
                "walls_fast": len(fast),
                "walls_bruteforce": len(brute),
            })
    res.details.update(
        over_c_class_bound=over, unions_of_classes=unions, within_power_bound=power, walls_match=wall_ok
    )
    return res


DEFAULT_IRREPS = {
    1: [(1,), (2,), (3,)],
    2: [(1, 0), (0, 1), (1, 1), (2, 0)],
}


@_timed
def local_invariance_suite(seed: int = 0, irreps: dict | None = None, pairs: int = 5) -> SuiteResult:
    """Representation weight data: same chamber, same fingerprint; across a wall, different."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("local-invariance")
    irreps = DEFAULT_IRREPS if irreps is None else irreps
    straddles = 0
    for r, hws in sorted(irreps.items()):
        rs = build_root_system("A", r)
        for hw in hws:
            cfg, _ = config_from_irrep(rs, weights_of_irrep(rs, rs.from_omega(hw)))
            dec = chambers(cfg)
            supports = cfg.supports()
            for idx in range(len(dec.chambers)):
                for _ in range(pairs):
                    a, b = dec.sample_chamber(idx, rng), dec.sample_chamber(idx, rng)
                    res.checked += 1
                    if fingerprint(cfg, a, supports) != fingerprint(cfg, b, supports):
                        res.fail({"irrep": list(hw), "rank": r, "lambda": _vec_json(a), "lambda_prime": _vec_json(b)})
            for w in dec.walls:
                if w.dim != cfg.rank - 1:
                    continue
                pair = _straddle(dec, w)
                if pair is None:
                    continue
                straddles += 1
                a, b = pair
                res.checked += 1
                if fingerprint(cfg, a, supports) == fingerprint(cfg, b, supports):
                    res.fail({"irrep": list(hw), "rank": r, "wall": w.to_json(),
                              "lambda": _vec_json(a), "lambda_prime": _vec_json(b)})
    res.details["straddles"] = straddles
    return res


def _straddle(dec, wall):
    """Two points on either side of a codimension-one wall, in different chambers."""
    h = hyperplane_of(wall.polytope)
    normal = h[:-1]
    p = wall.sample()
    for k in range(1, 12):
        step = Fraction(1, 2**k)
        a = tuple(x + step * n for x, n in zip(p, normal))
        b = tuple(x - step * n for x, n in zip(p, normal))
        ia, ib = dec.locate(a), dec.locate(b)
        if ia is not None and ib is not None and ia >= 0 and ib >= 0 and ia != ib:
            return a, b
    return None


SUITES = {
    "orbit-metric": orbit_metric_suite,
    "moment-recovery": moment_recovery_suite,
    "projection-lemma": projection_lemma_suite,
    "m-oracle": m_oracle_suite,
    "convexity": convexity_suite,
    "rescale-identity": rescale_identity_suite,
    "chambers": chambers_suite,
    "finiteness": finiteness_suite,
    "local-invariance": local_invariance_suite,
}

# quick sizes used by `verify` without --full
QUICK = {
    "orbit-metric": dict(per_face=5),
    "moment-recovery": dict(samples=20, exact_samples=2),
    "projection-lemma": dict(float_instances=200, exact_instances=20, max_exact_dim=6),
    "m-oracle": dict(levels=10, max_weights=5, per_rank=2),
    "convexity": dict(pairs=200),
    "rescale-identity": dict(max_den=8, samples=200),
    "chambers": dict(n_configs=8, samples=5),
    "finiteness": dict(n_configs=8, grid_size=2500),
    "local-invariance": dict(pairs=2),
}
