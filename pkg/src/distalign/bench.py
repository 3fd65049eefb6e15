"""Benchmark harness: single tasks, full suites and their config files.

Feature files live in one directory per dataset, named "<domain>.mdaf".
Task lists are fixed per benchmark; methods cover the source-only 1-NN
baseline, the kernel-ridge ablation, the manifold-feature baseline and the
full alignment classifier.
"""

import dataclasses
import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .alignment import AlignmentConfig, evaluate, fit, one_nn_labels, confusion_matrix
from .datasets import FeatureDataset, load_binary, make_task
from .kernels import KernelSpec
from .manifold import gfk_kernel, gfk_transform, pca_subspace

METHODS = ("source_1nn", "srm_only", "meda_ir", "mda")

DATASETS = {
    "office-caltech10": {
        "domains": ("A", "W", "D", "C"),
        "tasks": (
            ("C", "A"), ("C", "W"), ("C", "D"),
            ("A", "C"), ("A", "W"), ("A", "D"),
            ("W", "C"), ("W", "A"), ("W", "D"),
            ("D", "C"), ("D", "A"), ("D", "W"),
        ),
    },
    "office31": {
        "domains": ("A", "W", "D"),
        "tasks": (
            ("A", "W"), ("A", "D"),
            ("W", "A"), ("W", "D"),
            ("D", "A"), ("D", "W"),
        ),
    },
    "office-home": {
        "domains": ("A", "C", "P", "R"),
        "tasks": (
            ("A", "C"), ("A", "P"), ("A", "R"),
            ("C", "A"), ("C", "P"), ("C", "R"),
            ("P", "A"), ("P", "C"), ("P", "R"),
            ("R", "A"), ("R", "C"), ("R", "P"),
        ),
    },
}

_CONFIG_KEYS = ("lambda", "rho", "eta", "p", "iterations", "kernel", "mu", "subspace_dim")


@dataclass(frozen=True)
class BenchConfig:
    """Alignment hyperparameters plus the manifold baseline's subspace size."""

    alignment: AlignmentConfig = dataclasses.field(default_factory=AlignmentConfig)
    subspace_dim: int = 20

    def __post_init__(self):
        if self.subspace_dim < 1:
            raise ValueError(f"subspace_dim must be >= 1, got {self.subspace_dim}")


@dataclass(frozen=True)
class SuiteSpec:
    """One benchmark run: dataset, its fixed task list, features and methods."""

    dataset: str
    tasks: tuple
    features_dir: str
    methods: tuple
    config: BenchConfig


@dataclass(frozen=True)
class TaskResult:
    method: str
    source: str
    target: str
    accuracy: float  # fraction in [0, 1]
    confusion: np.ndarray
    diagnostics: tuple


@dataclass(frozen=True)
class ResultTable:
    """Per-task accuracies in percent, one column per method."""

    dataset: str
    tasks: tuple
    methods: tuple
    cells: np.ndarray  # (n_tasks, n_methods) percents

    @property
    def averages(self):
        return self.cells.mean(axis=0)

    def as_csv(self):
        lines = ["task," + ",".join(self.methods)]
        for (s, t), row in zip(self.tasks, self.cells):
            lines.append(f"{s}->{t}," + ",".join("%.1f" % v for v in row))
        lines.append("Average," + ",".join("%.1f" % v for v in self.averages))
        return "\n".join(lines) + "\n"

    def as_text(self):
        names = [f"{s}->{t}" for s, t in self.tasks] + ["Average"]
        width = max(len(n) for n in names) + 2
        cols = [max(len(m), 6) + 2 for m in self.methods]
        out = ["task".ljust(width) + "".join(m.rjust(c) for m, c in zip(self.methods, cols))]
        rows = list(self.cells) + [self.averages]
        for name, row in zip(names, rows):
            out.append(name.ljust(width) + "".join(("%.1f" % v).rjust(c) for v, c in zip(row, cols)))
        return "\n".join(out)


def _require_number(doc, key, default, integer=False):
    if key not in doc:
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"config key {key!r} must be a number, got {type(v).__name__}")
    if integer:
        if not isinstance(v, int):
            raise ValueError(f"config key {key!r} must be an integer, got {v!r}")
        return v
    return float(v)


def config_from_dict(doc):
    """Build a BenchConfig from a parsed JSON mapping.

    Missing keys fall back to the defaults (lambda=10, rho=1.0, p=10,
    eta=0.1, iterations=10, rbf kernel with median bandwidth, adaptive mu,
    subspace_dim=20). Unknown keys warn; wrongly typed values reject.
    """
    if not isinstance(doc, dict):
        raise ValueError(f"config must be a JSON object, got {type(doc).__name__}")
    for key in doc:
        if key not in _CONFIG_KEYS:
            warnings.warn(f"ignoring unknown config key {key!r}", stacklevel=2)

    kdoc = doc.get("kernel", {})
    if not isinstance(kdoc, dict):
        raise ValueError("config key 'kernel' must be an object")
    kind = kdoc.get("kind", "rbf")
    gamma = kdoc.get("gamma", "median")
    if gamma == "median":
        gamma = None
    elif isinstance(gamma, bool) or not isinstance(gamma, (int, float)):
        raise ValueError(f"kernel gamma must be a number or \"median\", got {gamma!r}")
    kernel = KernelSpec(kind=kind, gamma=gamma)

    mdoc = doc.get("mu", {})
    if not isinstance(mdoc, dict):
        raise ValueError("config key 'mu' must be an object")
    mu_mode = mdoc.get("mode", "adaptive")
    mu_value = mdoc.get("value")
    if mu_value is not None and (isinstance(mu_value, bool) or not isinstance(mu_value, (int, float))):
        raise ValueError(f"mu value must be a number, got {mu_value!r}")

    alignment = AlignmentConfig(
        lam=_require_number(doc, "lambda", 10.0),
        rho=_require_number(doc, "rho", 1.0),
        eta=_require_number(doc, "eta", 0.1),
        p=_require_number(doc, "p", 10, integer=True),
        iterations=_require_number(doc, "iterations", 10, integer=True),
        kernel=kernel,
        mu_mode=mu_mode,
        mu_value=float(mu_value) if mu_value is not None else None,
    )
    return BenchConfig(
        alignment=alignment,
        subspace_dim=_require_number(doc, "subspace_dim", 20, integer=True),
    )


def config_to_dict(config):
    a = config.alignment
    return {
        "lambda": a.lam,
        "rho": a.rho,
        "eta": a.eta,
        "p": a.p,
        "iterations": a.iterations,
        "kernel": {
            "kind": a.kernel.kind,
            "gamma": "median" if a.kernel.gamma is None else a.kernel.gamma,
        },
        "mu": {"mode": a.mu_mode, "value": a.mu_value},
        "subspace_dim": config.subspace_dim,
    }


def load_config(path=None):
    """Load a BenchConfig from a JSON file; None gives all defaults."""
    if path is None:
        return BenchConfig()
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def save_config(config, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(config), fh, indent=2)
        fh.write("\n")


def make_suite(dataset, features_dir, config=None, methods=METHODS):
    """Assemble a SuiteSpec with the benchmark's fixed task list."""
    if dataset not in DATASETS:
        raise ValueError(f"unknown dataset {dataset!r}; choose from {sorted(DATASETS)}")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
    return SuiteSpec(
        dataset=dataset,
        tasks=DATASETS[dataset]["tasks"],
        features_dir=str(features_dir),
        methods=tuple(methods),
        config=config or BenchConfig(),
    )


def feature_path(features_dir, domain):
    return Path(features_dir) / f"{domain}.mdaf"


def _meda_ir_task(task, subspace_dim):
    """Replace both feature sets with their geodesic-flow-kernel mapping."""
    d = task.source.d
    k = min(subspace_dim, d // 2, task.source.n, task.target.n)
    if k < 1:
        raise ValueError(f"feature dimension {d} too small for a subspace pair (need d >= 2)")
    P_s = pca_subspace(task.source.X, k)
    P_t = pca_subspace(task.target.X, k)
    G = gfk_kernel(P_s, P_t)
    src = FeatureDataset(
        X=gfk_transform(G, task.source.X),
        labels=task.source.labels,
        domain_name=task.source.domain_name,
        class_count=task.source.class_count,
    )
    tgt = FeatureDataset(
        X=gfk_transform(G, task.target.X),
        labels=task.target.labels,
        domain_name=task.target.domain_name,
        class_count=task.target.class_count,
    )
    return make_task(src, tgt)


def run_method(task, method, config=None):
    """Run one method on an assembled task with labeled target evaluation."""
    config = config or BenchConfig()
    if not task.target.is_labeled:
        raise ValueError("benchmark evaluation requires target labels")
    if method == "source_1nn":
        pred = one_nn_labels(task.source.X, task.source.labels, task.target.X)
        acc = float(np.mean(pred == task.target.labels))
        cm = confusion_matrix(task.target.labels, pred, task.class_count)
        return acc, cm, ()
    if method == "srm_only":
        # lam = rho = 0 makes every refinement pass identical, one suffices
        cfg = dataclasses.replace(config.alignment, lam=0.0, rho=0.0, iterations=1)
        aligner = fit(task, cfg)
    elif method == "meda_ir":
        task = _meda_ir_task(task, config.subspace_dim)
        aligner = fit(task, config.alignment)
    elif method == "mda":
        aligner = fit(task, config.alignment)
    else:
        raise ValueError(f"unknown method {method!r}")
    acc, cm = evaluate(aligner, task.target)
    return acc, cm, aligner.diagnostics


def run_task(spec, source, target, method):
    """Load a task's feature files and run one method on it."""
    src_path = feature_path(spec.features_dir, source)
    tgt_path = feature_path(spec.features_dir, target)
    for p in (src_path, tgt_path):
        if not p.exists():
            raise FileNotFoundError(f"missing feature file: {p}")
    task = make_task(
        load_binary(src_path, domain_name=source),
        load_binary(tgt_path, domain_name=target),
    )
    acc, cm, diags = run_method(task, method, spec.config)
    return TaskResult(
        method=method, source=source, target=target, accuracy=acc, confusion=cm, diagnostics=diags
    )


def run_suite(spec, out_csv=None):
    """Run every task for every method; emit the accuracy table.

    Fails fast before any work if feature files are missing, listing all of
    them. Tasks run in the fixed benchmark order.
    """
    needed = sorted({d for pair in spec.tasks for d in pair})
    missing = [str(feature_path(spec.features_dir, d)) for d in needed
               if not feature_path(spec.features_dir, d).exists()]
    if missing:
        raise FileNotFoundError("missing feature files: " + ", ".join(missing))

    cells = np.zeros((len(spec.tasks), len(spec.methods)))
    for i, (s, t) in enumerate(spec.tasks):
        for j, method in enumerate(spec.methods):
            cells[i, j] = 100.0 * run_task(spec, s, t, method).accuracy
    table = ResultTable(dataset=spec.dataset, tasks=spec.tasks, methods=spec.methods, cells=cells)
    if out_csv is not None:
        with open(out_csv, "w", encoding="ascii", newline="\n") as fh:
            fh.write(table.as_csv())
    return table
