"""scikit-learn style wrapper: encode logical qubit states into the family code."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_complex_array
from .forge import build_family
from .qubit import to_multiqubit


class FamilyCodeEncoder(TransformerMixin, BaseEstimator):
    """Map logical amplitudes (alpha, beta) to Dicke amplitudes of the ((n,2,3)) code.

    ``fit`` ignores its data apart from validation and builds the code.
    ``transform`` returns alpha*|0> + beta*|1> as an (n_samples, n+1) array
    over |D_0^n>, ..., |D_n^n>; ``inverse_transform`` projects back.
    """

    def __init__(self, n: int = 7, selector=None, mode: str = "auto"):
        self.n = n
        self.selector = selector
        self.mode = mode

    def fit(self, X=None, y=None):
        if X is not None:
            check_complex_array(X, 2)
        self.code_ = build_family(self.n, self.selector, self.mode)
        self.qubit_code_ = to_multiqubit(self.code_)
        self.codewords_ = np.column_stack(
            [np.asarray(self.code_.ket0, dtype=complex), np.asarray(self.code_.ket1, dtype=complex)]
        )
        self.n_features_in_ = 2
        return self

    def transform(self, X):
        check_is_fitted(self, "codewords_")
        X = check_complex_array(X, 2)
        return X @ self.codewords_.T

    def inverse_transform(self, Z):
        check_is_fitted(self, "codewords_")
        Z = check_complex_array(Z, self.n + 1, name="Z")
        return Z @ self.codewords_.conj()

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "codewords_")
        return np.array([f"D{w}" for w in range(self.n + 1)], dtype=object)
