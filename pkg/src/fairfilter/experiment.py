"""Config-driven experiments: spectrum dumps, filter reports and the
baseline-vs-filtered GCN comparison over seeded splits."""

import csv
import json
import logging
import os
import statistics
from dataclasses import dataclass, field, fields

import numpy as np

from .data import SbmConfig, dataset_stats, generate_sbm, load_dataset, save_dataset, split_nodes
from .exceptions import FairFilterError, InvalidConfigError
from .fair_filter import (
    FairGraphFilter,
    correlation_rho,
    effective_topology,
    rho_upper_bound,
)
from .gcn import TrainConfig, _train, predict
from .graph import normalized_adjacency, normalized_laplacian
from .metrics import fairness_report
from .spectral import eigendecompose, gft, low_frequency_energy

logger = logging.getLogger(__name__)

DEFAULT_TAU_GRID = (0.04, 0.05, 0.06)
METRICS = ("accuracy", "delta_sp", "delta_eo")


class ExperimentError(FairFilterError):
    """Failure inside one (variant, split) cell of an experiment."""

    def __init__(self, variant, split, cause):
        self.variant = variant
        self.split = split
        super().__init__(f"[variant={variant}, split={split}] {cause}")


@dataclass
class ExperimentConfig:
    """Experiment description, normally read from a JSON or TOML file.

    ``dataset`` holds either ``{"sbm": {...SbmConfig fields}}`` or
    ``{"files": {"nodes": ..., "edges": ..., "id_column": ...,
    "sensitive_column": ..., "label_column": ..., "standardize": ...}}``.
    Relative file paths resolve against ``base_dir``.
    """

    dataset: dict
    tau_grid: list = field(default_factory=lambda: list(DEFAULT_TAU_GRID))
    tau: float = 0.05
    num_splits: int = 5
    seed: int = 0
    split_fractions: list = field(default_factory=lambda: [0.4, 0.3, 0.3])
    train: dict = field(default_factory=dict)
    base_dir: str = "."

    def __post_init__(self):
        if not isinstance(self.dataset, dict) or len(set(self.dataset) & {"sbm", "files"}) != 1:
            raise InvalidConfigError("dataset must contain exactly one of 'sbm' or 'files'")
        self.tau_grid = [float(t) for t in self.tau_grid]
        if not self.tau_grid or any(not 0 < t <= 1 for t in self.tau_grid + [float(self.tau)]):
            raise InvalidConfigError("tau values must lie in (0, 1]")
        if int(self.num_splits) < 1:
            raise InvalidConfigError("num_splits must be >= 1")
        unknown = set(self.train) - {f.name for f in fields(TrainConfig)} - {"patience"}
        if unknown:
            raise InvalidConfigError(f"unknown train keys: {sorted(unknown)}")
        self.train_config(0)

    @classmethod
    def from_dict(cls, d, base_dir="."):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        d.setdefault("base_dir", base_dir)
        return cls(**d)

    @classmethod
    def from_file(cls, path):
        with open(path, "rb") as fh:
            raw = fh.read()
        if str(path).endswith(".toml"):
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            try:
                d = tomllib.loads(raw.decode())
            except tomllib.TOMLDecodeError as exc:
                raise InvalidConfigError(f"{path}: {exc}") from exc
        else:
            try:
                d = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InvalidConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(d, base_dir=os.path.dirname(os.path.abspath(path)))

    def train_config(self, seed):
        kw = dict(self.train)
        if "patience" in kw:
            kw["early_stop_patience"] = kw.pop("patience")
        kw["seed"] = int(seed)
        return TrainConfig(**kw)

    def to_dict(self):
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d.pop("base_dir")
        return d


def load_from_config(cfg):
    """Materialize the configured dataset."""
    if "sbm" in cfg.dataset:
        sbm = dict(cfg.dataset["sbm"])
        sbm.setdefault("seed", cfg.seed)
        return generate_sbm(SbmConfig.from_dict(sbm))
    files = dict(cfg.dataset["files"])
    try:
        nodes, edges = files.pop("nodes"), files.pop("edges")
    except KeyError as exc:
        raise InvalidConfigError(f"dataset.files needs {exc}") from exc
    return load_dataset(
        os.path.join(cfg.base_dir, nodes), os.path.join(cfg.base_dir, edges), **files
    )


def split_seeds(seed, split):
    """Independent ``(split_seed, init_seed)`` for split number ``split``."""
    a, b = np.random.SeedSequence([int(seed), int(split)]).generate_state(2)
    return int(a), int(b)


def spectrum_rows(dataset, spectrum=None):
    """``(lambda_i, |s~_i|, |y~_i|)`` rows in ascending frequency order."""
    if spectrum is None:
        spectrum = eigendecompose(normalized_laplacian(dataset.graph))
    s_t = np.abs(gft(spectrum, dataset.sensitive))
    y_t = np.abs(gft(spectrum, dataset.label_signal()))
    return list(zip(spectrum.eigenvalues.tolist(), s_t.tolist(), y_t.tolist()))


@dataclass
class ExperimentResult:
    rows: list
    chosen_tau: float
    config: dict
    stats: dict

    def variants(self):
        return list(dict.fromkeys(r["variant"] for r in self.rows))

    def aggregates(self):
        """Mean and sample standard deviation per variant and metric.

        The ``"fair"`` entry repeats the variant of the chosen tau. With a
        single split the std is reported as 0.
        """
        out = {}
        for v in self.variants():
            sel = [r for r in self.rows if r["variant"] == v]
            out[v] = {m: _mean_std([r[m] for r in sel]) for m in METRICS + ("val_accuracy",)}
        out["fair"] = out[fair_variant_name(self.chosen_tau)]
        return out

    def to_dict(self):
        return {
            "config": self.config,
            "dataset_stats": self.stats,
            "chosen_tau": self.chosen_tau,
            "rows": self.rows,
            "aggregates": self.aggregates(),
        }


def _mean_std(values):
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return {"mean": mean, "std": std}


def fair_variant_name(tau):
    return f"fair_tau={tau:g}"


def _evaluate(A_hat, X, d, masks, cfg, variant, split):
    try:
        model, hist = _train(A_hat, X, d.labels, masks.train, masks.val, cfg, None)
        y_hat = predict(model, A_hat, X)
        rep = fairness_report(y_hat, d.labels, d.sensitive, masks.test)
    except FairFilterError as exc:
        raise ExperimentError(variant, split, exc) from exc
    return {
        "variant": variant,
        "split": split,
        "accuracy": rep.accuracy,
        "delta_sp": rep.delta_sp,
        "delta_eo": rep.delta_eo,
        "val_accuracy": hist.val_accuracy[hist.best_epoch],
        "best_epoch": hist.best_epoch,
    }


def run_experiment(cfg, dataset=None):
    """Train the baseline GCN on raw features and an identically initialized
    GCN on fair-filtered features for each tau, over ``num_splits`` splits.

    Tau is chosen by mean validation accuracy across splits; ties go to the
    earlier grid entry.
    """
    d = dataset if dataset is not None else load_from_config(cfg)
    A_hat = normalized_adjacency(d.graph)
    spectrum = eigendecompose(normalized_laplacian(d.graph))

    filtered = {}
    for tau in cfg.tau_grid:
        try:
            flt = FairGraphFilter(tau=tau).fit(d.features, graph=d.graph,
                                               sensitive=d.sensitive, spectrum=spectrum)
        except FairFilterError as exc:
            raise ExperimentError(fair_variant_name(tau), None, exc) from exc
        filtered[tau] = flt.transform(d.features)

    rows = []
    for split in range(int(cfg.num_splits)):
        split_seed, init_seed = split_seeds(cfg.seed, split)
        masks = split_nodes(d.label_known, cfg.split_fractions, split_seed)
        tcfg = cfg.train_config(init_seed)
        rows.append(_evaluate(A_hat, d.features, d, masks, tcfg, "baseline", split))
        for tau in cfg.tau_grid:
            rows.append(_evaluate(A_hat, filtered[tau], d, masks, tcfg,
                                  fair_variant_name(tau), split))
        logger.info("split %d done", split)

    val = {
        tau: statistics.fmean(r["val_accuracy"] for r in rows
                              if r["variant"] == fair_variant_name(tau))
        for tau in cfg.tau_grid
    }
    chosen = max(cfg.tau_grid, key=lambda t: (val[t], -cfg.tau_grid.index(t)))
    return ExperimentResult(rows=rows, chosen_tau=chosen, config=cfg.to_dict(),
                            stats=dataset_stats(d))


CSV_FIELDS = ("variant", "split", "accuracy", "delta_sp", "delta_eo", "val_accuracy", "best_epoch")


def write_experiment(result, out_dir):
    """Write ``results.csv``, ``results.json`` and ``summary.txt``.

    Files carry full-precision floats and no timestamps, so identical runs
    produce identical bytes.
    """
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "results.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in result.rows:
            writer.writerow([repr(r[k]) if isinstance(r[k], float) else r[k] for k in CSV_FIELDS])
    with open(os.path.join(out_dir, "results.json"), "w") as fh:
        json.dump(result.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out_dir, "summary.txt"), "w") as fh:
        fh.write(format_summary(result))


def format_summary(result):
    agg = result.aggregates()
    lines = [f"chosen tau: {result.chosen_tau:g}",
             f"{'variant':<16}{'Accuracy (%)':>18}{'dSP (%)':>18}{'dEO (%)':>18}"]
    for v in ["baseline", "fair"] + [x for x in result.variants() if x != "baseline"]:
        cells = [f"{100 * agg[v][m]['mean']:.2f} +- {100 * agg[v][m]['std']:.2f}" for m in METRICS]
        lines.append(f"{v:<16}" + "".join(f"{c:>18}" for c in cells))
    return "\n".join(lines) + "\n"


def cmd_spectrum(cfg, out_dir):
    d = load_from_config(cfg)
    spectrum = eigendecompose(normalized_laplacian(d.graph))
    rows = spectrum_rows(d, spectrum)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "spectrum.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["lambda", "abs_s_tilde", "abs_y_tilde"])
        for row in rows:
            writer.writerow([repr(v) for v in row])
    summary = {
        "num_nodes": d.num_nodes,
        "s_energy_lowest_10pct": low_frequency_energy(spectrum, d.sensitive, 0.1),
        "y_energy_lowest_10pct": low_frequency_energy(spectrum, d.label_signal(), 0.1),
    }
    with open(os.path.join(out_dir, "spectrum_summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return rows


def cmd_filter_report(cfg, out_dir, tau=None):
    """Bias report for the fair filter plus rho/bound for the identity and
    uniform comparators; writes the filtered features."""
    tau = cfg.tau if tau is None else float(tau)
    d = load_from_config(cfg)
    spectrum = eigendecompose(normalized_laplacian(d.graph))
    flt = FairGraphFilter(tau=tau).fit(d.features, graph=d.graph,
                                       sensitive=d.sensitive, spectrum=spectrum)
    comparison = {"tau": tau}
    for name in ("identity", "fair", "uniform"):
        h = flt.frequency_response_ if name == "fair" else \
            FairGraphFilter(tau=tau, response=name).fit(
                graph=d.graph, sensitive=d.sensitive, spectrum=spectrum).frequency_response_
        comparison[name] = {
            "rho": correlation_rho(d.sensitive, effective_topology(spectrum, h)),
            "rho_bound": rho_upper_bound(spectrum, d.sensitive, h),
            "gains": h.gains.tolist(),
        }
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "bias_report.json"), "w") as fh:
        json.dump(flt.report_.to_dict(), fh, indent=2)
        fh.write("\n")
    with open(os.path.join(out_dir, "filter_comparison.json"), "w") as fh:
        json.dump(comparison, fh, indent=2)
        fh.write("\n")
    Xf = flt.transform(d.features)
    names = d.feature_names or [f"f{j}" for j in range(d.num_features)]
    with open(os.path.join(out_dir, "features_filtered.csv"), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *names])
        ids = d.node_ids or [str(i) for i in range(d.num_nodes)]
        for nid, row in zip(ids, Xf.tolist()):
            writer.writerow([nid, *(repr(v) for v in row)])
    return flt.report_, comparison


def cmd_experiment(cfg, out_dir):
    result = run_experiment(cfg)
    write_experiment(result, out_dir)
    return result


def cmd_generate(cfg, out_dir):
    if "sbm" not in cfg.dataset:
        raise InvalidConfigError("generate needs an 'sbm' dataset section")
    d = load_from_config(cfg)
    os.makedirs(out_dir, exist_ok=True)
    save_dataset(d, os.path.join(out_dir, "nodes.csv"), os.path.join(out_dir, "edges.csv"))
    with open(os.path.join(out_dir, "stats.json"), "w") as fh:
        json.dump(dataset_stats(d), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return d
