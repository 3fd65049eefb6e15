"""Dataset containers, file I/O and normalization for feature matrices.

A dataset is one domain's worth of pre-extracted features: an n x d matrix,
optional 1-based integer labels, and a class count. Datasets are immutable
after construction and safe to share between threads.
"""

import struct
from dataclasses import dataclass

import numpy as np

MDAF_MAGIC = b"MDAF"
MDAF_VERSION = 1

_HEADER = struct.Struct("<4sIIII")  # magic, version, n, d, class_count


def _freeze(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FeatureDataset:
    """An n x d feature matrix with optional labels.

    Parameters
    ----------
    X : ndarray, shape (n, d)
        Real-valued activations, finite everywhere.
    labels : ndarray of int or None
        Per-sample class ids in 1..class_count. None for unlabeled data;
        a dataset is wholly labeled or wholly unlabeled.
    domain_name : str
        Free-form tag (e.g. "amazon").
    class_count : int
        Number of classes C. Labels never exceed it; classes may be empty.
    """

    X: np.ndarray
    labels: np.ndarray | None
    domain_name: str
    class_count: int

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"feature matrix must be n x d with n,d >= 1, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("feature matrix contains non-finite entries")
        if self.class_count < 1:
            raise ValueError(f"class_count must be positive, got {self.class_count}")
        object.__setattr__(self, "X", _freeze(X))
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (X.shape[0],):
                raise ValueError(
                    f"labels must have one entry per sample, got {labels.shape} for n={X.shape[0]}"
                )
            if labels.min() < 1 or labels.max() > self.class_count:
                raise ValueError(
                    f"labels must lie in 1..{self.class_count}, "
                    f"got range [{labels.min()}, {labels.max()}]"
                )
            object.__setattr__(self, "labels", _freeze(labels))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def is_labeled(self):
        return self.labels is not None


@dataclass(frozen=True)
class DaTask:
    """A (source, target) dataset pair sharing feature dimension and class set.

    Source labels are required; target labels are optional and used only
    for evaluation.
    """

    source: FeatureDataset
    target: FeatureDataset

    def __post_init__(self):
        if not self.source.is_labeled:
            raise ValueError("source dataset must be labeled")
        if self.source.d != self.target.d:
            raise ValueError(
                f"feature dimension mismatch: source d={self.source.d}, target d={self.target.d}"
            )
        if self.source.class_count != self.target.class_count:
            raise ValueError(
                f"class count mismatch: source C={self.source.class_count}, "
                f"target C={self.target.class_count}"
            )

    @property
    def class_count(self):
        return self.source.class_count


def make_task(source, target):
    """Assemble a domain-adaptation task from a labeled source and a target."""
    return DaTask(source=source, target=target)


def load_csv(path, class_count=None, domain_name=None):
    """Load a dataset from CSV.

    Each row is one sample: an integer label first (0 = unlabeled), then d
    decimal features. Rows must all have the same length, and either every
    label is 0 (unlabeled dataset) or none is.

    ``class_count`` defaults to the maximum label for labeled data and must
    be given explicitly for unlabeled data.
    """
    rows = []
    raw_labels = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
                if width < 2:
                    raise ValueError(f"{path}:{ln}: need a label column plus at least one feature")
            elif len(cells) != width:
                raise ValueError(
                    f"{path}:{ln}: ragged rows ({len(cells)} cells, expected {width})"
                )
            try:
                raw_labels.append(int(cells[0]))
            except ValueError:
                raise ValueError(f"{path}:{ln}: non-integer label {cells[0]!r}") from None
            try:
                rows.append([float(c) for c in cells[1:]])
            except ValueError:
                raise ValueError(f"{path}:{ln}: non-numeric feature cell") from None
    if not rows:
        raise ValueError(f"{path}: empty dataset")

    labels = np.asarray(raw_labels, dtype=np.int64)
    if np.all(labels == 0):
        if class_count is None:
            raise ValueError(f"{path}: unlabeled dataset, class_count must be given")
        labels = None
    elif np.any(labels == 0):
        raise ValueError(f"{path}: mixed labeled/unlabeled rows")
    else:
        if class_count is None:
            class_count = int(labels.max())
    return FeatureDataset(
        X=np.asarray(rows, dtype=np.float64),
        labels=labels,
        domain_name=domain_name or str(path),
        class_count=int(class_count),
    )


def save_csv(ds, path):
    """Write a dataset as CSV with full-precision decimals (17 significant digits)."""
    labels = ds.labels if ds.is_labeled else np.zeros(ds.n, dtype=np.int64)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for lab, row in zip(labels, ds.X):
            fh.write("%d,%s\n" % (lab, ",".join("%.17g" % v for v in row)))


def load_binary(path, domain_name=None):
    """Load a dataset from an MDAF file.

    MDAF layout (little-endian): magic "MDAF", u32 version=1, u32 n, u32 d,
    u32 C, n x i32 labels (0 = unlabeled), n*d x f32 features row-major.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, n, d, class_count = _HEADER.unpack_from(blob, 0)
    if magic != MDAF_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != MDAF_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    if n < 1 or d < 1 or class_count < 1:
        raise ValueError(f"{path}: invalid header counts n={n} d={d} C={class_count}")
    expect = _HEADER.size + 4 * n + 4 * n * d
    if len(blob) != expect:
        raise ValueError(f"{path}: payload is {len(blob)} bytes, header declares {expect}")
    off = _HEADER.size
    labels = np.frombuffer(blob, dtype="<i4", count=n, offset=off).astype(np.int64)
    off += 4 * n
    X = np.frombuffer(blob, dtype="<f4", count=n * d, offset=off)
    X = X.reshape(n, d).astype(np.float64)
    if np.all(labels == 0):
        labels = None
    elif np.any(labels == 0):
        raise ValueError(f"{path}: mixed labeled/unlabeled rows")
    return FeatureDataset(
        X=X, labels=labels, domain_name=domain_name or str(path), class_count=class_count
    )


def save_binary(ds, path):
    """Write a dataset in MDAF format. Features are cast to float32 on write."""
    labels = ds.labels if ds.is_labeled else np.zeros(ds.n, dtype=np.int64)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MDAF_MAGIC, MDAF_VERSION, ds.n, ds.d, ds.class_count))
        fh.write(labels.astype("<i4").tobytes())
        fh.write(np.ascontiguousarray(ds.X, dtype="<f4").tobytes())


def normalize(ds, mode="none"):
    """Return a normalized copy of a dataset.

    ``none`` is the identity; ``zscore`` gives each column mean 0 and
    variance 1 (zero-variance columns pass through unchanged);
    ``unit_length`` scales each row to unit L2 norm (zero rows unchanged).
    """
    if mode == "none":
        return ds
    X = np.array(ds.X, dtype=np.float64)
    if mode == "zscore":
        std = X.std(axis=0)
        keep = std > 0.0
        X[:, keep] = (X[:, keep] - X[:, keep].mean(axis=0)) / std[keep]
    elif mode == "unit_length":
        norms = np.linalg.norm(X, axis=1)
        nz = norms > 0.0
        X[nz] = X[nz] / norms[nz, None]
    else:
        raise ValueError(f"unknown normalization mode {mode!r}")
    return FeatureDataset(
        X=X, labels=ds.labels, domain_name=ds.domain_name, class_count=ds.class_count
    )
