import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from straightpath.estimators import BruteForceSearch, LongestPathSearch


@pytest.fixture
def islands():
    alt = np.full((36, 72), -1000, dtype=np.int16)
    alt[10:20, 30:45] = 500
    alt[25:30, 5:20] = 800
    return alt


def test_params_round_trip():
    est = LongestPathSearch(mode="land", factor=6, gap_tolerance=10)
    params = est.get_params()
    assert params["mode"] == "land" and params["factor"] == 6
    assert clone(est).get_params() == params
    assert est.set_params(step=0.5).step == 0.5


def test_fit_on_array(islands):
    est = LongestPathSearch().fit(islands)
    assert est.length_km_ == est.path_.length_km
    assert est.upper_bound_km_ >= est.length_km_
    assert len(est.pyramid_) > 1
    assert est.predict([[est.path_.circle.origin, est.path_.circle.heading]])[0] == est.length_km_


def test_predict_canonicalises_circles(islands):
    est = LongestPathSearch(mode="land").fit(islands)
    a, b = est.predict([[30, 40], [210, 140]])
    assert a == b


def test_predict_validation(islands):
    with pytest.raises(NotFittedError):
        LongestPathSearch().predict([[0, 0]])
    est = LongestPathSearch().fit(islands)
    with pytest.raises(ValueError):
        est.predict([[0, 0, 0]])


def test_brute_force_agrees_with_solver(islands):
    solver = LongestPathSearch().fit(islands)
    oracle = BruteForceSearch(origin_step=5, heading_step=5).fit(islands)
    assert oracle.lengths_.shape == (36, 36)
    assert solver.length_km_ >= oracle.length_km_ - 2 * 5 * 40030.17 / 360
    assert solver.upper_bound_km_ >= oracle.length_km_


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        LongestPathSearch().fit(np.zeros(10))
    with pytest.raises(ValueError):
        LongestPathSearch(mode="air").fit(np.zeros((36, 72)))
