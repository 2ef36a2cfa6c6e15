"""Graph Fourier transform over the normalized Laplacian eigenbasis."""

import csv
from dataclasses import dataclass

import numpy as np

from ._validation import check_signal
from .exceptions import DimensionMismatchError, EigenFailureError, NotSymmetricError

# eigenvalues closer than this are treated as one degenerate eigenspace
DEGENERACY_TOL = 1e-9
_SIGN_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Laplacian.

    Column ``i`` of ``eigenvectors`` pairs with ``eigenvalues[i]``. Both
    arrays are read-only.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def num_nodes(self):
        return self.eigenvalues.shape[0]

    def _check(self, z, name="signal"):
        return check_signal(z, self.num_nodes, name)


def _fix_signs(V):
    """Flip columns so the first entry with magnitude > 1e-12 is positive."""
    significant = np.abs(V) > _SIGN_TOL
    first = np.argmax(significant, axis=0)
    lead = V[first, np.arange(V.shape[1])]
    signs = np.where(lead < 0, -1.0, 1.0)
    return V * signs


def _order_degenerate(lam, V):
    """Order columns inside each repeated eigenvalue lexicographically."""
    n = lam.shape[0]
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[stop] - lam[start] <= DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            block = V[:, start:stop]
            # np.lexsort treats its last key as primary
            order = np.lexsort(block[::-1])
            V[:, start:stop] = block[:, order]
        start = stop
    return V


def eigendecompose(L):
    """Full symmetric eigendecomposition with a deterministic basis.

    Eigenvalues come back ascending; each eigenvector is sign-normalized and
    columns inside degenerate eigenspaces are ordered lexicographically.
    """
    L = np.asarray(L, dtype=np.float64)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {L.shape}")
    asym = np.max(np.abs(L - L.T)) if L.size else 0.0
    if asym > 1e-12:
        raise NotSymmetricError(f"matrix is not symmetric (max |L - L^T| = {asym:.3g})")
    try:
        lam, V = np.linalg.eigh(L)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(str(exc)) from exc
    V = _order_degenerate(lam, _fix_signs(V))
    lam.setflags(write=False)
    V.setflags(write=False)
    return Spectrum(lam, V)


def gft(spectrum, z):
    """Graph Fourier transform ``V^T z``."""
    return spectrum.eigenvectors.T @ spectrum._check(z)


def igft(spectrum, z_tilde):
    """Inverse transform ``V z~``."""
    return spectrum.eigenvectors @ spectrum._check(z_tilde, "spectral signal")


def _check_response(spectrum, h):
    h = np.asarray(getattr(h, "gains", h), dtype=np.float64)
    if h.shape != (spectrum.num_nodes,):
        raise DimensionMismatchError(
            f"frequency response has shape {h.shape}, expected ({spectrum.num_nodes},)"
        )
    return h


def apply_filter(spectrum, h, z_in):
    """Filter a signal in the frequency domain: ``V diag(h) V^T z_in``."""
    h = _check_response(spectrum, h)
    V = spectrum.eigenvectors
    return V @ (h * (V.T @ spectrum._check(z_in)))


def spectrum_profile(spectrum, z):
    """Pairs ``(lambda_i, |z~_i|)`` in ascending frequency order."""
    mags = np.abs(gft(spectrum, z))
    return list(zip(spectrum.eigenvalues.tolist(), mags.tolist()))


def low_frequency_energy(spectrum, z, fraction=0.1):
    """Share of ``||z||^2`` carried by the lowest ``fraction`` of frequencies."""
    z_tilde = gft(spectrum, z)
    total = float(z_tilde @ z_tilde)
    if total == 0.0:
        return 0.0
    k = max(1, int(np.floor(fraction * spectrum.num_nodes)))
    return float(z_tilde[:k] @ z_tilde[:k]) / total


def write_profile_csv(path, profile):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "magnitude"])
        for lam, mag in profile:
            writer.writerow([repr(lam), repr(mag)])
