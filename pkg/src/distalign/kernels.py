"""Gram-matrix computation for the kernelized classifier."""

from dataclasses import dataclass

import numpy as np

_SUBSAMPLE_SEED = 7041990  # fixed so median_bandwidth is deterministic
_MAX_SUBSAMPLE = 1000


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and parameters.

    ``kind`` is "linear" or "rbf". For rbf, ``gamma`` is the bandwidth
    (> 0); ``gamma=None`` means "resolve via median_bandwidth on the
    training matrix at fit time".
    """

    kind: str = "rbf"
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and self.gamma is not None and not self.gamma > 0.0:
            raise ValueError(f"rbf bandwidth must be positive, got {self.gamma}")


def gram(spec, X, Z=None):
    """Compute the n x m Gram matrix between the rows of X and Z.

    Z defaults to X, in which case the output is symmetric and the rbf
    diagonal is exactly 1.
    """
    X = np.asarray(X, dtype=np.float64)
    self_gram = Z is None
    Z = X if self_gram else np.asarray(Z, dtype=np.float64)
    if X.ndim != 2 or Z.ndim != 2 or X.shape[1] != Z.shape[1]:
        raise ValueError(f"incompatible shapes {X.shape} and {Z.shape}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Z))):
        raise ValueError("non-finite kernel inputs")

    if spec.kind == "linear":
        return X @ Z.T

    if spec.gamma is None:
        raise ValueError("rbf kernel used without a resolved bandwidth")
    sq = _sq_dists(X, Z)
    K = np.exp(-spec.gamma * sq)
    if self_gram:
        K = 0.5 * (K + K.T)
        np.fill_diagonal(K, 1.0)
    return K


def _sq_dists(X, Z):
    xx = np.einsum("ij,ij->i", X, X)
    zz = np.einsum("ij,ij->i", Z, Z)
    sq = xx[:, None] + zz[None, :] - 2.0 * (X @ Z.T)
    np.maximum(sq, 0.0, out=sq)
    return sq


def median_bandwidth(X):
    """Default rbf bandwidth: 1 / median of pairwise squared distances.

    Uses a deterministic seeded subsample of min(n, 1000) rows; the result
    is clamped so gamma never exceeds 1e12 (all-identical input).
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise ValueError("median_bandwidth needs at least two samples")
    if n > _MAX_SUBSAMPLE:
        rng = np.random.default_rng(_SUBSAMPLE_SEED)
        idx = np.sort(rng.choice(n, size=_MAX_SUBSAMPLE, replace=False))
        X = X[idx]
    sq = _sq_dists(X, X)
    iu = np.triu_indices(X.shape[0], k=1)
    med = float(np.median(sq[iu]))
    return 1.0 / max(med, 1e-12)


def resolve_kernel(spec, X):
    """Return a KernelSpec with a concrete bandwidth for the given data."""
    if spec.kind == "rbf" and spec.gamma is None:
        return KernelSpec(kind="rbf", gamma=median_bandwidth(X))
    return spec
