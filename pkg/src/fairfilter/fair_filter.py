"""Fairness-aware spectral filter design and topology-bias measurement.

The functional API works on a precomputed :class:`~fairfilter.spectral.Spectrum`;
:class:`FairGraphFilter` wraps it as a scikit-learn transformer that is
fitted on a graph and a sensitive attribute and then filters node features.
"""

import json
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_matrix, check_sensitive
from .exceptions import AllFrequenciesCutError, DimensionMismatchError, InvalidTauError
from .graph import as_graph, normalized_laplacian
from .spectral import _check_response, eigendecompose, gft


@dataclass(frozen=True)
class FilterResponse:
    """Per-frequency gains aligned with a spectrum's eigenvalue order."""

    gains: np.ndarray

    def __len__(self):
        return self.gains.shape[0]


@dataclass(frozen=True)
class BiasReport:
    tau: float
    m: np.ndarray
    cutoff_set: np.ndarray
    rho: float
    rho_bound: float

    @property
    def k(self):
        return int(self.cutoff_set.shape[0])

    def to_dict(self):
        return {
            "tau": self.tau,
            "k": self.k,
            "rho": self.rho,
            "rho_bound": self.rho_bound,
            "m": self.m.tolist(),
            "cutoff": self.cutoff_set.tolist(),
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d):
        return cls(
            tau=float(d["tau"]),
            m=np.asarray(d["m"], dtype=np.float64),
            cutoff_set=np.asarray(d["cutoff"], dtype=np.int64),
            rho=float(d["rho"]),
            rho_bound=float(d["rho_bound"]),
        )


def _check_tau(tau):
    tau = float(tau)
    if not 0.0 < tau <= 1.0:
        raise InvalidTauError(f"tau must lie in (0, 1], got {tau}")
    return tau


def bias_coefficients(spectrum, s):
    """``m_i = |s~_i| |1 - lambda_i|`` for a sensitive vector in {-1, +1}."""
    s = check_sensitive(s, spectrum.num_nodes)
    return np.abs(gft(spectrum, s)) * np.abs(1.0 - spectrum.eigenvalues)


def cutoff_set(m, tau):
    """Indices whose coefficient strictly exceeds ``tau * max(m)``."""
    tau = _check_tau(tau)
    m = np.asarray(m, dtype=np.float64)
    m_max = m.max() if m.size else 0.0
    if m_max <= 0.0:
        return np.array([], dtype=np.int64)
    return np.flatnonzero(m > tau * m_max)


def fair_filter(m, tau):
    """Fairness-aware frequency response.

    Frequencies in the cutoff set are rescaled so that each one contributes
    exactly the complement mean ``c`` to ``sum_i m_i h_i``; all others pass
    with gain 1.
    """
    m = np.asarray(m, dtype=np.float64)
    cut = cutoff_set(m, tau)
    n, k = m.shape[0], cut.shape[0]
    if k == n:
        raise AllFrequenciesCutError(tau, n)
    h = np.ones(n)
    if k:
        keep = np.ones(n, dtype=bool)
        keep[cut] = False
        c = m[keep].sum() / (n - k)
        assert np.all(m[cut] > 0.0)
        h[cut] = c / m[cut]
    return FilterResponse(h)


def uniform_counterpart(h_fair):
    """Constant response with the same l1 mass as ``h_fair``."""
    h = np.asarray(getattr(h_fair, "gains", h_fair), dtype=np.float64)
    return FilterResponse(np.full(h.shape, h.mean()))


def effective_topology(spectrum, h):
    """``V (I - Lambda) diag(h) V^T``: the aggregation operator seen by
    features that were pre-filtered with ``h``."""
    h = _check_response(spectrum, h)
    V = spectrum.eigenvectors
    return (V * ((1.0 - spectrum.eigenvalues) * h)) @ V.T


def correlation_rho(s, A_f):
    """``||s^T A_f||_1`` computed directly from the dense matrix."""
    s = np.asarray(s, dtype=np.float64)
    A_f = np.asarray(A_f, dtype=np.float64)
    if A_f.ndim != 2 or A_f.shape[0] != s.shape[0]:
        raise DimensionMismatchError(
            f"s has length {s.shape[0]} but A_f has shape {A_f.shape}"
        )
    return float(np.abs(s @ A_f).sum())


def rho_upper_bound(spectrum, s, h):
    """``sqrt(N) * sum_i m_i |h_i|``."""
    h = _check_response(spectrum, h)
    m = bias_coefficients(spectrum, s)
    return float(np.sqrt(spectrum.num_nodes) * np.sum(m * np.abs(h)))


def filter_features(spectrum, h, X):
    """Apply the filter column-wise to an ``N x F`` feature matrix."""
    h = _check_response(spectrum, h)
    X = check_matrix(X, spectrum.num_nodes)
    V = spectrum.eigenvectors
    return V @ (h[:, None] * (V.T @ X))


def filter_signal(spectrum, h, z):
    """Post-processing form: filter a single output signal (e.g. scores)."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D signal, got shape {z.shape}")
    return filter_features(spectrum, h, z[:, None])[:, 0]


def bias_report(spectrum, s, h, tau):
    """Assemble a :class:`BiasReport` for response ``h``.

    ``rho`` goes through the dense effective topology, independently of the
    spectral bound it is reported next to.
    """
    m = bias_coefficients(spectrum, s)
    return BiasReport(
        tau=float(tau),
        m=m,
        cutoff_set=cutoff_set(m, tau),
        rho=correlation_rho(s, effective_topology(spectrum, h)),
        rho_bound=rho_upper_bound(spectrum, s, h),
    )


RESPONSES = ("fair", "uniform", "identity")


class FairGraphFilter(TransformerMixin, BaseEstimator):
    """Spectral pre-processing filter that attenuates sensitive-attribute
    structure in node signals.

    Parameters
    ----------
    tau : float, default=0.05
        Relative threshold in (0, 1]; frequencies whose bias coefficient
        exceeds ``tau * max(m)`` are attenuated.
    response : {"fair", "uniform", "identity"}, default="fair"
        ``"uniform"`` fits the constant filter with the same l1 mass as the
        fair one; ``"identity"`` passes signals through unchanged. Both exist
        as comparators.

    Attributes
    ----------
    spectrum_ : Spectrum
    bias_coefficients_ : ndarray of shape (n_nodes,)
    cutoff_set_ : ndarray of int
    frequency_response_ : FilterResponse
    report_ : BiasReport

    Examples
    --------
    >>> from fairfilter import build_graph, FairGraphFilter
    >>> g = build_graph(2, [(0, 1)])
    >>> flt = FairGraphFilter(tau=0.5).fit([[1.0], [-1.0]], graph=g, sensitive=[1, -1])
    >>> flt.frequency_response_.gains.tolist()
    [1.0, 0.0]
    """

    def __init__(self, tau=0.05, response="fair"):
        self.tau = tau
        self.response = response

    def fit(self, X=None, y=None, *, graph=None, sensitive, spectrum=None):
        """Design the filter for ``graph`` and ``sensitive``.

        ``X`` is only used to check that it has one row per node. A
        precomputed ``spectrum`` skips the eigendecomposition, which is the
        dominant cost when sweeping ``tau``.
        """
        if self.response not in RESPONSES:
            raise ValueError(f"response must be one of {RESPONSES}, got {self.response!r}")
        tau = _check_tau(self.tau)
        if spectrum is None:
            if graph is None:
                raise ValueError("fit needs either graph or spectrum")
            spectrum = eigendecompose(normalized_laplacian(as_graph(graph)))
        n = spectrum.num_nodes
        s = check_sensitive(sensitive, n)
        if X is not None:
            X = check_matrix(X, n)
            self.n_features_in_ = X.shape[1]

        m = bias_coefficients(spectrum, s)
        if self.response == "identity":
            h = FilterResponse(np.ones(n))
        else:
            h = fair_filter(m, tau)
            if self.response == "uniform":
                h = uniform_counterpart(h)

        self.spectrum_ = spectrum
        self.sensitive_ = s
        self.bias_coefficients_ = m
        self.cutoff_set_ = cutoff_set(m, tau)
        self.frequency_response_ = h
        self.report_ = bias_report(spectrum, s, h, tau)
        return self

    def transform(self, X):
        check_is_fitted(self, "frequency_response_")
        X = check_matrix(X, self.spectrum_.num_nodes)
        if hasattr(self, "n_features_in_") and X.shape[1] != self.n_features_in_:
            raise DimensionMismatchError(
                f"X has {X.shape[1]} features, filter was fitted with {self.n_features_in_}"
            )
        return filter_features(self.spectrum_, self.frequency_response_, X)

    def filter_signal(self, z):
        """Filter a model's output signal (post-processing use)."""
        check_is_fitted(self, "frequency_response_")
        return filter_signal(self.spectrum_, self.frequency_response_, z)

    def effective_topology(self):
        check_is_fitted(self, "frequency_response_")
        return effective_topology(self.spectrum_, self.frequency_response_)
