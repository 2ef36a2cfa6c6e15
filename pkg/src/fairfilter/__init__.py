"""Fairness-aware graph spectral filtering."""

from .data import (
    Dataset,
    SbmConfig,
    SplitMasks,
    dataset_stats,
    generate_sbm,
    load_dataset,
    save_dataset,
    split_nodes,
)
from .exceptions import FairFilterError
from .fair_filter import (
    BiasReport,
    FairGraphFilter,
    FilterResponse,
    bias_coefficients,
    bias_report,
    correlation_rho,
    cutoff_set,
    effective_topology,
    fair_filter,
    filter_features,
    filter_signal,
    rho_upper_bound,
    uniform_counterpart,
)
from .gcn import GCNClassifier, GcnModel, TrainConfig
from .graph import Graph, build_graph, normalized_adjacency, normalized_laplacian
from .metrics import (
    FairnessReport,
    accuracy,
    equal_opportunity,
    fairness_report,
    statistical_parity,
)
from .spectral import (
    Spectrum,
    apply_filter,
    eigendecompose,
    gft,
    igft,
    spectrum_profile,
)

__version__ = "0.1.0"
