"""Input checks for the estimator layer (sklearn's check_array rejects complex)."""

from __future__ import annotations

import numpy as np


def check_complex_array(X, n_features: int | None = None, name: str = "X") -> np.ndarray:
    """2-D finite complex array, optionally with a fixed column count."""
    arr = np.asarray(X)
    if arr.dtype == object:
        try:
            arr = arr.astype(complex)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"{name} has non-numeric entries") from exc
    if not np.issubdtype(arr.dtype, np.number):
        raise ValueError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(complex, copy=False)
    if arr.ndim == 1:
        raise ValueError(f"{name} must be 2-D; reshape a single sample with X.reshape(1, -1)")
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {arr.ndim} dimensions")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} has no samples")
    if n_features is not None and arr.shape[1] != n_features:
        raise ValueError(f"{name} has {arr.shape[1]} columns, expected {n_features}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinity")
    return arr
