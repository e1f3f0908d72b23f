import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from exotic_codes import FamilyCodeEncoder
from exotic_codes.forge import NoIrrepAvailable


@pytest.fixture(scope="module")
def enc():
    return FamilyCodeEncoder(n=7).fit()


def test_shapes_and_names(enc):
    X = np.array([[1, 0], [0, 1], [1 / np.sqrt(2), 1j / np.sqrt(2)]])
    Z = enc.transform(X)
    assert Z.shape == (3, 8)
    assert list(enc.get_feature_names_out()) == [f"D{w}" for w in range(8)]
    assert np.allclose(np.linalg.norm(Z, axis=1), 1)


def test_round_trip(enc):
    rng = np.random.default_rng(1)
    X = rng.normal(size=(20, 2)) + 1j * rng.normal(size=(20, 2))
    assert np.allclose(enc.inverse_transform(enc.transform(X)), X)


def test_codeword_columns(enc):
    assert np.allclose(enc.codewords_.conj().T @ enc.codewords_, np.eye(2))
    assert np.allclose(enc.transform([[1, 0]])[0], enc.code_.ket0)


def test_validation(enc):
    with pytest.raises(ValueError):
        enc.transform(np.ones((2, 3)))
    with pytest.raises(ValueError):
        enc.transform([[np.nan, 0]])
    with pytest.raises(ValueError):
        enc.inverse_transform(np.ones((1, 5)))
    with pytest.raises(NotFittedError):
        FamilyCodeEncoder().transform([[1, 0]])


def test_params_and_clone():
    est = FamilyCodeEncoder(n=13, selector=None, mode="numeric")
    assert est.get_params() == {"n": 13, "selector": None, "mode": "numeric"}
    other = clone(est).set_params(n=17)
    assert other.n == 17 and est.n == 13


def test_fit_rejects_exceptional_n():
    with pytest.raises(NoIrrepAvailable):
        FamilyCodeEncoder(n=9).fit()
