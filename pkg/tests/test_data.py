import os
from pathlib import Path

import numpy as np
import pytest

from fairfilter import (
    SbmConfig,
    TrainConfig,
    dataset_stats,
    generate_sbm,
    load_dataset,
    normalized_adjacency,
    save_dataset,
    split_nodes,
)
from fairfilter.exceptions import (
    InvalidConfigError,
    MissingColumnError,
    NotBinarySensitiveError,
    SelfLoopError,
    TooFewNodesError,
    UnknownNodeIdError,
)
from fairfilter.gcn import predict, train

FIX = Path(__file__).parent / "fixtures"

# Published Pokec statistics, checked only when the real files are available.
POKEC = {
    "pokec_z": {"size_s_neg": 4851, "size_s_pos": 2808, "num_features": 59,
                "inter_edges": 1730, "intra_edges": 39370},
    "pokec_n": {"size_s_neg": 4040, "size_s_pos": 2145,
                "inter_edges": 1422, "intra_edges": 29220},
}


def test_toy_fixture_loads_exactly():
    d = load_dataset(FIX / "toy_nodes.csv", FIX / "toy_edges.txt")
    assert d.node_ids == ("u1", "u7", "u3")
    assert d.feature_names == ("age", "score")
    assert d.features.tolist() == [[0.5, 1.0], [-2.25, 0.0], [3.0, 2.5]]
    assert d.sensitive.tolist() == [1, -1, 1]
    assert d.labels.tolist() == [1, 0, 0]
    assert d.label_known.tolist() == [True, True, False]
    assert d.graph.edges.tolist() == [[0, 1], [1, 2]]
    assert d.graph.degree.tolist() == [1, 2, 1]
    assert d.label_signal().tolist() == [1.0, -1.0, 0.0]
    assert dataset_stats(d) == {
        "num_nodes": 3, "size_s_neg": 1, "size_s_pos": 2,
        "inter_edges": 2, "intra_edges": 0, "num_features": 2,
    }


def test_path_fixture_with_edge_header():
    d = load_dataset(FIX / "path_nodes.csv", FIX / "path_edges.csv")
    assert d.graph.edges.tolist() == [[0, 1]]
    stats = dataset_stats(d)
    assert stats["inter_edges"] == 1 and stats["intra_edges"] == 0


def _write(tmp_path, nodes, edges):
    n, e = tmp_path / "nodes.csv", tmp_path / "edges.txt"
    n.write_text(nodes)
    e.write_text(edges)
    return n, e


def test_unknown_node_id(tmp_path):
    n, e = _write(tmp_path, "id,x,sensitive,label\na,1,0,1\nb,2,1,0\n", "a b\na zz\n")
    with pytest.raises(UnknownNodeIdError) as info:
        load_dataset(n, e)
    assert info.value.node_id == "zz"


def test_missing_column(tmp_path):
    n, e = _write(tmp_path, "id,x,label\na,1,1\nb,2,0\n", "a b\n")
    with pytest.raises(MissingColumnError):
        load_dataset(n, e)


def test_non_binary_sensitive(tmp_path):
    n, e = _write(tmp_path, "id,x,sensitive,label\na,1,2,1\nb,2,1,0\n", "a b\n")
    with pytest.raises(NotBinarySensitiveError):
        load_dataset(n, e)


def test_custom_schema_and_pm1_sensitive(tmp_path):
    n, e = _write(tmp_path, "uid,x,region,y\na,1,-1,-1\nb,2,1,1\n", "a,b\n")
    d = load_dataset(n, e, id_column="uid", sensitive_column="region", label_column="y")
    assert d.sensitive.tolist() == [-1, 1]
    assert d.label_known.tolist() == [False, True]


def test_self_loops(tmp_path):
    n, e = _write(tmp_path, "id,x,sensitive,label\na,1,0,1\nb,2,1,0\n", "a b\nb b\n")
    with pytest.raises(SelfLoopError):
        load_dataset(n, e)
    assert load_dataset(n, e, drop_self_loops=True).graph.num_edges == 1


def test_standardize(tmp_path):
    n, e = _write(tmp_path, "id,x,c,sensitive,label\na,1,5,0,1\nb,3,5,1,0\n", "a b\n")
    X = load_dataset(n, e, standardize=True).features
    assert X.tolist() == [[-1.0, 0.0], [1.0, 0.0]]


@pytest.mark.skipif("POKEC_DIR" not in os.environ, reason="Pokec files not available")
@pytest.mark.parametrize("name", sorted(POKEC))
def test_pokec_reference_stats(name):
    root = Path(os.environ["POKEC_DIR"])
    d = load_dataset(root / f"{name}_nodes.csv", root / f"{name}_edges.txt")
    stats = dataset_stats(d)
    for key, value in POKEC[name].items():
        assert stats[key] == value


# -- SBM generator --------------------------------------------------------------

def test_sbm_deterministic():
    cfg = SbmConfig(group_sizes=(50, 50), p_intra=0.2, p_inter=0.02, seed=11)
    a, b = generate_sbm(cfg), generate_sbm(cfg)
    assert np.array_equal(a.graph.edges, b.graph.edges)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, b.labels)
    assert not np.array_equal(a.features, generate_sbm(SbmConfig(seed=12)).features[:100])


def test_sbm_stats_match_enumeration():
    d = generate_sbm(SbmConfig(group_sizes=(40, 60), p_intra=0.15, p_inter=0.03, seed=5))
    A = d.graph.adjacency()
    s = d.sensitive
    inter = intra = 0
    for i in range(d.num_nodes):
        for j in range(i + 1, d.num_nodes):
            if A[i, j]:
                if s[i] == s[j]:
                    intra += 1
                else:
                    inter += 1
    stats = dataset_stats(d)
    assert (stats["inter_edges"], stats["intra_edges"]) == (inter, intra)
    assert (stats["size_s_neg"], stats["size_s_pos"]) == (40, 60)
    assert np.all(d.graph.degree >= 1)


@pytest.mark.parametrize("seed", range(5))
def test_sbm_equal_probabilities_binomial(seed):
    p = 0.05
    d = generate_sbm(SbmConfig(group_sizes=(100, 100), p_intra=p, p_inter=p, seed=seed))
    stats = dataset_stats(d)
    for count, pairs in ((stats["inter_edges"], 100 * 100), (stats["intra_edges"], 2 * 4950)):
        assert abs(count - pairs * p) <= 3 * np.sqrt(pairs * p * (1 - p))


def test_sbm_label_flip_rate():
    q, n = 0.15, 4000
    d = generate_sbm(SbmConfig(group_sizes=(n // 2, n // 2), p_intra=0.01, p_inter=0.001,
                               label_flip=q, seed=2))
    latent = (d.sensitive + 1) // 2
    agree = np.mean(d.labels == latent)
    assert abs(agree - (1 - q)) <= 3 * np.sqrt(q * (1 - q) / n)


def test_sbm_noise_free_features():
    d = generate_sbm(SbmConfig(group_sizes=(50, 50), p_intra=0.2, p_inter=0.005,
                               label_flip=0.0, feature_noise=0.0, feature_dim=4, seed=0))
    assert np.array_equal(np.argmax(d.features[:, :2], axis=1), d.labels)
    assert np.array_equal(d.features[:, 2] + d.features[:, 3], np.ones(100))

    masks = split_nodes(d.label_known, seed=0)
    A_hat = normalized_adjacency(d.graph)
    model, _ = train(A_hat, d.features, d.labels, masks.train, masks.val, TrainConfig(seed=0))
    pred = predict(model, A_hat, d.features)
    assert np.mean(pred[masks.test] == d.labels[masks.test]) == 1.0


@pytest.mark.parametrize("kw", [
    {"p_intra": 0.1, "p_inter": 0.2},
    {"p_intra": 1.5},
    {"label_flip": 0.5},
    {"feature_dim": 3},
    {"feature_noise": -1.0},
])
def test_sbm_invalid_config(kw):
    with pytest.raises(InvalidConfigError):
        SbmConfig(**kw)


def test_sbm_config_from_dict():
    cfg = SbmConfig.from_dict({"group_sizes": [10, 20], "seed": 3})
    assert cfg.group_sizes == (10, 20) and cfg.seed == 3
    with pytest.raises(InvalidConfigError):
        SbmConfig.from_dict({"bogus": 1})


# -- splits and round trip -------------------------------------------------------

def test_split_sizes_and_determinism():
    known = np.ones(10, dtype=bool)
    a = split_nodes(known, seed=1)
    assert a.sizes() == (4, 3, 3)
    b = split_nodes(known, seed=1)
    assert all(np.array_equal(x, y) for x, y in zip(
        (a.train, a.val, a.test), (b.train, b.val, b.test)))


def test_split_disjoint_cover(rng):
    known = rng.random(101) < 0.8
    m = split_nodes(known, seed=4)
    allidx = np.concatenate([m.train, m.val, m.test])
    assert len(set(allidx.tolist())) == allidx.size
    assert sorted(allidx.tolist()) == np.flatnonzero(known).tolist()
    k = int(known.sum())
    assert m.sizes()[0] == int(0.4 * k) and m.sizes()[1] == int(0.3 * k)


def test_split_errors():
    with pytest.raises(TooFewNodesError):
        split_nodes(np.ones(2, dtype=bool))
    with pytest.raises(InvalidConfigError):
        split_nodes(np.ones(10, dtype=bool), fractions=(0.5, 0.3, 0.3))


def test_save_load_roundtrip(tmp_path):
    d = generate_sbm(SbmConfig(group_sizes=(50, 50), seed=8))
    save_dataset(d, tmp_path / "n.csv", tmp_path / "e.csv")
    back = load_dataset(tmp_path / "n.csv", tmp_path / "e.csv")
    assert np.array_equal(back.features, d.features)
    assert np.array_equal(back.graph.edges, d.graph.edges)
    assert np.array_equal(back.sensitive, d.sensitive)
    assert np.array_equal(back.labels, d.labels)
    assert np.array_equal(back.label_known, d.label_known)
    assert back.node_ids == d.node_ids and back.feature_names == d.feature_names
