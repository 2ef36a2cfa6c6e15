"""Datasets: file loading, homophilic SBM generation and seeded splits."""

import logging
import math
import re
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .exceptions import (
    InvalidConfigError,
    MissingColumnError,
    NotBinarySensitiveError,
    SelfLoopError,
    TooFewNodesError,
    UnknownNodeIdError,
)
from .graph import build_graph

logger = logging.getLogger(__name__)

_SPLIT_RE = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class Dataset:
    """Attributed graph with a binary sensitive attribute and binary labels.

    ``sensitive`` is encoded in {-1, +1}. ``labels`` holds 0/1 for every
    node; entries where ``label_known`` is False carry 0 and are never
    used for training or evaluation.
    """

    graph: object
    features: np.ndarray
    sensitive: np.ndarray
    labels: np.ndarray
    label_known: np.ndarray
    node_ids: tuple = None
    feature_names: tuple = None

    @property
    def num_nodes(self):
        return self.graph.num_nodes

    @property
    def num_features(self):
        return self.features.shape[1]

    def label_signal(self):
        """Labels as a +-1 graph signal, 0 where unknown."""
        return np.where(self.label_known, 2.0 * self.labels - 1.0, 0.0)


@dataclass(frozen=True)
class SbmConfig:
    """Two-block stochastic block model keyed on the sensitive attribute.

    Nodes ``0..n_neg-1`` get ``s=-1``; the rest ``s=+1``. Each node's latent
    label equals its group (``s=-1`` -> 0, ``s=+1`` -> 1) and is flipped
    with probability ``label_flip``. ``p_inter == p_intra`` gives the
    Erdos-Renyi null model with no homophily.
    """

    group_sizes: tuple = (100, 100)
    p_intra: float = 0.1
    p_inter: float = 0.005
    label_flip: float = 0.15
    feature_dim: int = 8
    feature_noise: float = 1.0
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(v) for v in self.group_sizes)
        object.__setattr__(self, "group_sizes", sizes)
        if len(sizes) != 2 or min(sizes) < 1:
            raise InvalidConfigError(f"group_sizes must be two positive ints, got {sizes}")
        if not 0 <= self.p_inter <= self.p_intra <= 1:
            raise InvalidConfigError(
                f"need 0 <= p_inter <= p_intra <= 1, got p_inter={self.p_inter}, "
                f"p_intra={self.p_intra}"
            )
        if not 0 <= self.label_flip < 0.5:
            raise InvalidConfigError(f"label_flip must be in [0, 0.5), got {self.label_flip}")
        if self.feature_dim < 4:
            raise InvalidConfigError("feature_dim must be >= 4 (two one-hot blocks)")
        if self.feature_noise < 0:
            raise InvalidConfigError("feature_noise must be non-negative")

    @classmethod
    def from_dict(cls, d):
        known = cls.__dataclass_fields__
        unknown = set(d) - set(known)
        if unknown:
            raise InvalidConfigError(f"unknown SBM config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class SplitMasks:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def sizes(self):
        return len(self.train), len(self.val), len(self.test)


def _sbm_edges(s, p_intra, p_inter, rng):
    n = s.shape[0]
    rows = []
    for i in range(n - 1):
        p = np.where(s[i + 1:] == s[i], p_intra, p_inter)
        hit = np.flatnonzero(rng.random(n - i - 1) < p) + i + 1
        rows.append(np.column_stack([np.full(hit.size, i), hit]))
    edges = np.concatenate(rows) if rows else np.empty((0, 2), dtype=np.int64)
    return [tuple(e) for e in edges.tolist()]


def generate_sbm(cfg):
    """Sample a :class:`Dataset` from ``cfg``.

    Any node left isolated receives one edge to a uniformly chosen other
    node, so every degree is positive. Features are
    ``[one-hot(label), one-hot(group), 0...]`` padded to ``feature_dim``
    columns plus i.i.d. Gaussian noise with std ``feature_noise``.
    """
    if not isinstance(cfg, SbmConfig):
        cfg = SbmConfig.from_dict(dict(cfg))
    rng = np.random.default_rng(cfg.seed)
    n_neg, n_pos = cfg.group_sizes
    n = n_neg + n_pos
    if n < 2:
        raise InvalidConfigError("an SBM needs at least two nodes")
    s = np.concatenate([-np.ones(n_neg, dtype=np.int64), np.ones(n_pos, dtype=np.int64)])

    edges = _sbm_edges(s, cfg.p_intra, cfg.p_inter, rng)
    degree = np.bincount(np.asarray(edges, dtype=np.int64).ravel(), minlength=n)
    for i in range(n):
        if degree[i] == 0:
            j = int(rng.integers(n - 1))
            j += j >= i
            edges.append((i, j))
            degree[i] += 1
            degree[j] += 1
    graph = build_graph(n, edges)

    latent = (s + 1) // 2
    flip = rng.random(n) < cfg.label_flip
    labels = np.where(flip, 1 - latent, latent).astype(np.int64)

    X = np.zeros((n, cfg.feature_dim))
    X[np.arange(n), labels] = 1.0
    X[np.arange(n), 2 + latent] = 1.0
    X += rng.normal(0.0, cfg.feature_noise, size=X.shape) if cfg.feature_noise else 0.0

    return Dataset(
        graph=graph,
        features=X,
        sensitive=s,
        labels=labels,
        label_known=np.ones(n, dtype=bool),
        node_ids=tuple(str(i) for i in range(n)),
        feature_names=tuple(f"f{j}" for j in range(cfg.feature_dim)),
    )


def _map_sensitive(values):
    vals = pd.to_numeric(values, errors="coerce").to_numpy(dtype=np.float64)
    present = set(np.unique(vals[~np.isnan(vals)]).tolist())
    if np.isnan(vals).any() or not (present <= {0.0, 1.0} or present <= {-1.0, 1.0}):
        raise NotBinarySensitiveError(
            f"sensitive column must hold 0/1 (or -1/+1) values, found {sorted(present)}"
        )
    return np.where(vals == 1.0, 1, -1).astype(np.int64)


def _read_edges(edge_file):
    pairs = []
    with open(edge_file) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = [t for t in _SPLIT_RE.split(line) if t]
            if len(tokens) < 2:
                raise ValueError(f"{edge_file}:{lineno}: expected two node ids")
            pairs.append((lineno, tokens[0], tokens[1]))
    return pairs


def load_dataset(node_file, edge_file, id_column="id", sensitive_column="sensitive",
                 label_column="label", standardize=False, drop_self_loops=False):
    """Read a node CSV and an edge list into a :class:`Dataset`.

    Every column of the node CSV other than the id, sensitive and label
    columns is a numeric feature. Labels of -1 or blank mark unknown nodes.
    Nodes are reindexed 0..N-1 in file order. Edges listed in both
    directions are kept once; a header line in the edge file is skipped
    when its tokens are not node ids.
    """
    nodes = pd.read_csv(node_file, dtype={id_column: str}, float_precision="round_trip")
    for col in (id_column, sensitive_column, label_column):
        if col not in nodes.columns:
            raise MissingColumnError(f"{node_file}: missing column {col!r}")
    ids = nodes[id_column].astype(str).tolist()
    if len(set(ids)) != len(ids):
        raise ValueError(f"{node_file}: duplicate node ids")
    index = {nid: i for i, nid in enumerate(ids)}

    feat_cols = [c for c in nodes.columns if c not in (id_column, sensitive_column, label_column)]
    try:
        X = nodes[feat_cols].to_numpy(dtype=np.float64)
    except ValueError as exc:
        raise ValueError(f"{node_file}: non-numeric feature column ({exc})") from exc
    if not np.isfinite(X).all():
        raise ValueError(f"{node_file}: missing or non-finite feature values")
    if standardize and X.size:
        std = X.std(axis=0)
        X = (X - X.mean(axis=0)) / np.where(std > 0, std, 1.0)

    s = _map_sensitive(nodes[sensitive_column])
    raw = pd.to_numeric(nodes[label_column], errors="coerce").to_numpy(dtype=np.float64)
    known = ~(np.isnan(raw) | (raw == -1))
    if not np.isin(raw[known], (0.0, 1.0)).all():
        raise ValueError(f"{node_file}: labels must be 0, 1, -1 or blank")
    labels = np.where(known, raw, 0).astype(np.int64)

    edges, seen, dupes, loops = [], set(), 0, 0
    for k, (lineno, a, b) in enumerate(_read_edges(edge_file)):
        if k == 0 and a not in index and b not in index:
            try:
                float(a), float(b)
            except ValueError:
                continue
        for tok in (a, b):
            if tok not in index:
                raise UnknownNodeIdError(tok)
        i, j = index[a], index[b]
        if i == j:
            if not drop_self_loops:
                raise SelfLoopError(i)
            loops += 1
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            dupes += 1
            continue
        seen.add(key)
        edges.append(key)
    if dupes or loops:
        logger.info("edge file %s: skipped %d duplicate edges and %d self-loops",
                    edge_file, dupes, loops)

    return Dataset(
        graph=build_graph(len(ids), edges),
        features=X,
        sensitive=s,
        labels=labels,
        label_known=known,
        node_ids=tuple(ids),
        feature_names=tuple(feat_cols),
    )


def save_dataset(d, node_file, edge_file):
    """Write ``d`` in the format read by :func:`load_dataset`.

    Floats are written with 17 significant digits so a reload is exact.
    """
    ids = d.node_ids or tuple(str(i) for i in range(d.num_nodes))
    names = d.feature_names or tuple(f"f{j}" for j in range(d.num_features))
    frame = pd.DataFrame(d.features, columns=list(names))
    frame.insert(0, "id", list(ids))
    frame["sensitive"] = (d.sensitive > 0).astype(np.int64)
    frame["label"] = np.where(d.label_known, d.labels, -1)
    frame.to_csv(node_file, index=False, float_format="%.17g", lineterminator="\n")
    with open(edge_file, "w") as fh:
        for i, j in d.graph.edges.tolist():
            fh.write(f"{ids[i]},{ids[j]}\n")


def dataset_stats(d):
    """Group sizes, inter/intra edge counts and feature dimension."""
    s = np.asarray(d.sensitive)
    e = d.graph.edges
    inter = int(np.sum(s[e[:, 0]] != s[e[:, 1]])) if e.size else 0
    return {
        "num_nodes": d.num_nodes,
        "size_s_neg": int(np.sum(s == -1)),
        "size_s_pos": int(np.sum(s == 1)),
        "inter_edges": inter,
        "intra_edges": d.graph.num_edges - inter,
        "num_features": d.num_features,
    }


def split_nodes(label_known, fractions=(0.4, 0.3, 0.3), seed=0):
    """Seeded shuffle of the label-known nodes, cut into train/val/test.

    Train and validation sizes are ``floor(fraction * n)``; the remainder
    goes to test.
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
        raise InvalidConfigError(f"fractions must be three non-negatives summing to 1, got {fractions}")
    known = np.flatnonzero(np.asarray(label_known, dtype=bool))
    n = known.size
    n_train = math.floor(fractions[0] * n + 1e-9)
    n_val = math.floor(fractions[1] * n + 1e-9)
    if min(n_train, n_val, n - n_train - n_val) < 1:
        raise TooFewNodesError(
            f"{n} label-known nodes cannot fill splits {fractions} with at least one node each"
        )
    perm = np.random.default_rng(seed).permutation(known)
    return SplitMasks(
        train=np.sort(perm[:n_train]),
        val=np.sort(perm[n_train:n_train + n_val]),
        test=np.sort(perm[n_train + n_val:]),
    )
