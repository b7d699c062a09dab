import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from governext import GoverningExtension
from governext.errors import BasisNotCoprime


def test_params_and_clone():
    est = GoverningExtension(field="d=-23", p=3, generator_index=1)
    assert est.get_params() == {"field": "d=-23", "p": 3, "generator_index": 1}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est
    est.set_params(p=2)
    assert est.p == 2


def test_unfitted():
    with pytest.raises(NotFittedError):
        GoverningExtension().predict([["3", "7"]])


def test_predict_and_count_rational():
    sets = [["3", "7"], ["3", "5"], ["3", "5", "inf"], "5"]
    est = GoverningExtension("Q", 2).fit(sets)
    assert est.predict(sets).tolist() == [True, False, True, True]
    assert est.count(sets).tolist() == [1, 0, 1, 1]


def test_transform_minus_23():
    est = GoverningExtension("d=-23", 3).fit([["13.1", "13.2", "151.1", "31.1"]])
    X = est.transform(["13.1", "13.2", "151.1"])
    assert isinstance(X, np.ndarray) and X.shape == (3, 1)
    assert X[:, 0].tolist() == [1, 2, 0]
    assert est.governing_matrix(["13.1", "151.1"]).tolist() == [[1, 0]]
    assert est.predict([["151.1"], ["13.1"], ["13.1", "13.2"]]).tolist() == [True, False, True]


def test_unfitted_place_rejected():
    est = GoverningExtension("d=-23", 3).fit([["13.1"]])
    with pytest.raises(BasisNotCoprime):
        est.predict([["31.1"]])


def test_generator_index_does_not_change_predictions():
    sets = [["7.1", "13.2"], ["19", "7.2"], ["13.1"]]
    a = GoverningExtension("79", 3, generator_index=0).fit(sets)
    b = GoverningExtension("79", 3, generator_index=2).fit(sets)
    assert a.count(sets).tolist() == b.count(sets).tolist()
