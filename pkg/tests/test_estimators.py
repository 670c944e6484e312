from fractions import Fraction as F

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from liequot.errors import DomainError
from liequot.estimators import ChamberDecomposer, SemistabilityTransformer, as_rational_array
from liequot.vgit import is_semistable

LINE3 = np.array([[0], [1], [2]])


def test_params_and_clone():
    est = ChamberDecomposer(region=[(0, 2)], max_rank=2)
    assert est.get_params() == {"region": [(0, 2)], "gram": None, "max_rank": 2}
    c = clone(est)
    assert c.get_params() == est.get_params() and c is not est
    t = SemistabilityTransformer(criterion="stable").set_params(criterion="m_sign")
    assert t.criterion == "m_sign"


def test_decomposer_fit_predict():
    est = ChamberDecomposer(region=[(0, 2)]).fit(LINE3)
    assert est.n_walls_ == 3 and est.n_chambers_ == 2
    pred = est.predict([[F(1, 2)], ["3/2"], [1], [5]])
    assert pred[0] != pred[1] and pred[0] >= 0 and pred[1] >= 0
    assert list(pred[2:]) == [-1, -2]
    assert len(set(est.fingerprints())) == 2


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ChamberDecomposer().predict([[0]])
    with pytest.raises(NotFittedError):
        SemistabilityTransformer().transform([[0]])


def test_transformer_matches_engine():
    t = SemistabilityTransformer().fit(LINE3)
    X = t.transform([[F(1, 2)], [3]])
    assert X.shape == (2, 7)
    for j, s in enumerate(t.supports_):
        assert X[0, j] == is_semistable(t.config_, s, (F(1, 2),))
    assert not X[1].any()
    assert list(t.get_feature_names_out()[:3]) == ["s0", "s1", "s2"]
    signs = SemistabilityTransformer(criterion="m_sign").fit_transform(LINE3)
    assert signs.shape == (3, 7)
    assert set(np.unique(signs)) <= {-1, 0, 1}
    h = t.fingerprint_hashes([[F(1, 2)], [F(1, 3)]])
    assert h[0] == h[1]


def test_pipeline_compatible():
    pipe = make_pipeline(SemistabilityTransformer())
    out = pipe.fit(LINE3).transform([[1]])
    assert out.shape == (1, 7)


def test_validation():
    with pytest.raises(DomainError):
        as_rational_array([])
    with pytest.raises(DomainError):
        as_rational_array([[1, 2], [3]])
    with pytest.raises(DomainError):
        as_rational_array(np.array([[np.nan]]))
    with pytest.raises(DomainError):
        ChamberDecomposer().fit(LINE3, sample_weight=[1, 0, 1])
    with pytest.raises(DomainError):
        SemistabilityTransformer().fit(LINE3).transform([[1, 2]])
    with pytest.raises(Exception):
        SemistabilityTransformer(criterion="bogus").fit(LINE3)
    assert as_rational_array(np.array([[0.1]])) == [(F(1, 10),)]
