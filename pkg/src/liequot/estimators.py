"""Estimator-style wrappers around the semistability engine.

Weights play the role of training data: ``fit`` takes an ``(n_weights, rank)``
array (multiplicities via ``sample_weight``), and ``predict``/``transform``
take an ``(n_levels, rank)`` array of levels ``lam``. Entries may be ints,
Fractions or rational strings; floats are converted through their shortest
repr so that ``0.1`` means ``1/10``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._exact import fmt, to_fraction
from .errors import ConfigurationError, DomainError
from .vgit import WeightConfig, chambers, fingerprint_hash, is_semistable, is_stable, m_sign


def as_rational_array(X, *, ncols: int | None = None, name: str = "X") -> list[tuple[Fraction, ...]]:
    """Validate a 2-D array-like and convert each entry to a Fraction."""
    if isinstance(X, np.ndarray) and X.dtype.kind in "iuf":
        if not np.all(np.isfinite(X)):
            raise DomainError(f"{name} contains non-finite values")
    rows = [list(r) for r in X]
    if not rows:
        raise DomainError(f"{name} is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise DomainError(f"{name} is ragged")
    if ncols is not None and width != ncols:
        raise DomainError(f"{name} has {width} columns, expected {ncols}")
    try:
        return [tuple(to_fraction(x.item() if isinstance(x, np.generic) else x) for x in r) for r in rows]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"{name}: {exc}") from None


def as_multiplicities(sample_weight, n: int) -> tuple[int, ...]:
    if sample_weight is None:
        return (1,) * n
    m = np.asarray(sample_weight)
    if m.shape != (n,):
        raise DomainError(f"sample_weight must have shape ({n},)")
    if not np.all(m == np.round(m)) or np.any(m < 1):
        raise DomainError("sample_weight must hold positive integer multiplicities")
    return tuple(int(x) for x in m)


def _build_config(X, sample_weight, gram) -> WeightConfig:
    ws = as_rational_array(X, name="weights")
    mults = as_multiplicities(sample_weight, len(ws))
    g = () if gram is None else tuple(as_rational_array(gram, ncols=len(ws[0]), name="gram"))
    return WeightConfig(len(ws[0]), tuple(ws), mults, g)


class ChamberDecomposer(BaseEstimator):
    """Walls and chambers of a weight configuration over a box region.

    Parameters
    ----------
    region : list of (lo, hi) or None
        Box in weight space; ``None`` takes the weights' bounding box padded by one.
    gram : array-like or None
        Inner product on weight space (identity when omitted).
    max_rank : int
        Largest rank accepted for the exact subdivision.
    """

    def __init__(self, region=None, gram=None, max_rank: int = 3):
        self.region = region
        self.gram = gram
        self.max_rank = max_rank

    def fit(self, X, y=None, sample_weight=None):
        cfg = _build_config(X, sample_weight, self.gram)
        self.config_ = cfg
        self.decomposition_ = chambers(cfg, self.region, max_rank=self.max_rank)
        self.n_walls_ = len(self.decomposition_.walls)
        self.n_chambers_ = len(self.decomposition_.chambers)
        self.representatives_ = [c.representative for c in self.decomposition_.chambers]
        return self

    def predict(self, X) -> np.ndarray:
        """Chamber index per level; ``-1`` on a wall, ``-2`` outside the region."""
        check_is_fitted(self, "decomposition_")
        pts = as_rational_array(X, ncols=self.config_.rank, name="levels")
        out = []
        for p in pts:
            k = self.decomposition_.locate(p)
            out.append(-2 if k is None else k)
        return np.array(out, dtype=int)

    def fingerprints(self) -> list[str]:
        check_is_fitted(self, "decomposition_")
        return [c.fingerprint_hash for c in self.decomposition_.chambers]


class SemistabilityTransformer(TransformerMixin, BaseEstimator):
    """Map levels to the 0/1 (or sign) matrix over all supports.

    ``criterion`` is ``"semistable"``, ``"stable"`` or ``"m_sign"``; the last
    returns the exact sign of the numerical function per support.
    """

    def __init__(self, criterion: str = "semistable", gram=None):
        self.criterion = criterion
        self.gram = gram

    def fit(self, X, y=None, sample_weight=None):
        if self.criterion not in ("semistable", "stable", "m_sign"):
            raise ConfigurationError(f"unknown criterion {self.criterion!r}")
        self.config_ = _build_config(X, sample_weight, self.gram)
        self.supports_ = self.config_.supports()
        self.n_features_out_ = len(self.supports_)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "config_")
        pts = as_rational_array(X, ncols=self.config_.rank, name="levels")
        fn = {"semistable": is_semistable, "stable": is_stable, "m_sign": m_sign}[self.criterion]
        out = np.zeros((len(pts), len(self.supports_)), dtype=int)
        for i, p in enumerate(pts):
            for j, s in enumerate(self.supports_):
                out[i, j] = int(fn(self.config_, s, p))
        return out

    def fingerprint_hashes(self, X) -> list[str]:
        """Hash of the semistable support family at each level."""
        check_is_fitted(self, "config_")
        pts = as_rational_array(X, ncols=self.config_.rank, name="levels")
        return [
            fingerprint_hash(tuple(s for s in self.supports_ if is_semistable(self.config_, s, p)))
            for p in pts
        ]

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        check_is_fitted(self, "config_")
        return np.array(["s" + "_".join(str(i) for i in s) for s in self.supports_], dtype=object)


def format_levels(pts: Sequence[Sequence[Fraction]]) -> list[list[str]]:
    return [[fmt(x) for x in p] for p in pts]
