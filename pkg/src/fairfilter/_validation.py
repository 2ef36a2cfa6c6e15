"""Input validation helpers shared by the estimators and functional API."""

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    EmptyMaskError,
    NotBinarySensitiveError,
)


def check_signal(z, n, name="signal"):
    """Return ``z`` as a finite float64 vector of length ``n``."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1 or z.shape[0] != n:
        raise DimensionMismatchError(
            f"{name} has shape {z.shape}, expected ({n},)"
        )
    if not np.all(np.isfinite(z)):
        raise ValueError(f"{name} contains non-finite entries")
    return z


def check_matrix(X, n_rows=None, name="X"):
    """Return ``X`` as a finite 2-D float64 array, optionally checking rows."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got ndim={X.ndim}")
    if n_rows is not None and X.shape[0] != n_rows:
        raise DimensionMismatchError(
            f"{name} has {X.shape[0]} rows, expected {n_rows}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    return X


def check_sensitive(s, n=None):
    """Validate a sensitive-attribute vector with entries in {-1, +1}."""
    s = np.asarray(s)
    if s.ndim != 1 or (n is not None and s.shape[0] != n):
        raise DimensionMismatchError(
            f"sensitive vector has shape {s.shape}, expected ({n},)"
        )
    bad = ~np.isin(s, (-1, 1))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NotBinarySensitiveError(
            f"sensitive attribute must be in {{-1, +1}}; entry {i} is {s[i]!r}"
        )
    return s.astype(np.float64)


def check_binary(v, n, name):
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != n:
        raise DimensionMismatchError(f"{name} has shape {v.shape}, expected ({n},)")
    if not np.isin(v, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return v.astype(np.int64)


def check_mask(mask, n):
    """Normalize a boolean mask or an index collection to sorted node indices.

    ``None`` selects every node.
    """
    if mask is None:
        return np.arange(n)
    mask = np.asarray(mask)
    if mask.dtype == bool:
        if mask.shape != (n,):
            raise DimensionMismatchError(
                f"boolean mask has shape {mask.shape}, expected ({n},)"
            )
        idx = np.flatnonzero(mask)
    else:
        idx = np.unique(mask.astype(np.int64).ravel())
        if idx.size and (idx[0] < 0 or idx[-1] >= n):
            raise DimensionMismatchError(f"mask index outside [0, {n})")
    if idx.size == 0:
        raise EmptyMaskError("mask selects no nodes")
    return idx
