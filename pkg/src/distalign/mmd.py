"""Maximum mean discrepancy matrices and the marginal/conditional balance factor.

The composite operator M = (1-mu)*M0 + mu*sum_c M_c enters the classifier
as the quadratic penalty tr(F' M F) on stacked source+target predictions.
Every building block is an outer product of a signed indicator vector, so
M0 and each M_c are rank-1 PSD with zero entry sum by construction.
"""

from dataclasses import dataclass

import numpy as np

_SEPARATOR_RIDGE = 1e-3  # fixed regularization of the domain separator


@dataclass(frozen=True)
class MmdOperator:
    """Composite MMD matrix (1-mu)*M0 + mu*sum_c M_c with its balance factor."""

    M: np.ndarray
    mu: float


def marginal_mmd(n_s, n_t):
    """Marginal MMD matrix M0 = e e' with e = (1/n_s .. ; -1/n_t ..)."""
    if n_s < 1 or n_t < 1:
        raise ValueError(f"need at least one sample per domain, got n_s={n_s}, n_t={n_t}")
    e = np.concatenate([np.full(n_s, 1.0 / n_s), np.full(n_t, -1.0 / n_t)])
    return np.outer(e, e)


def conditional_mmd(source_labels, target_pseudo_labels, c, class_count=None):
    """Class-c conditional MMD matrix over the stacked source+target rows.

    Entries follow the same outer-product pattern as the marginal matrix but
    restricted to class-c samples on each side. If either side has no class-c
    samples the class is skipped and the zero matrix is returned.
    """
    ys = np.asarray(source_labels, dtype=np.int64)
    yt = np.asarray(target_pseudo_labels, dtype=np.int64)
    C = class_count if class_count is not None else max(ys.max(), yt.max())
    for name, lab in (("source", ys), ("target", yt)):
        if lab.size and (lab.min() < 1 or lab.max() > C):
            raise ValueError(f"{name} labels out of range 1..{C}")
    if not 1 <= c <= C:
        raise ValueError(f"class id {c} out of range 1..{C}")
    n = ys.size + yt.size
    src = ys == c
    tgt = yt == c
    ns_c = int(src.sum())
    nt_c = int(tgt.sum())
    if ns_c == 0 or nt_c == 0:
        return np.zeros((n, n))
    e = np.zeros(n)
    e[: ys.size][src] = 1.0 / ns_c
    e[ys.size :][tgt] = -1.0 / nt_c
    return np.outer(e, e)


def composite_mmd(source_labels, target_pseudo_labels, mu, class_count):
    """Assemble the full operator (1-mu)*M0 + mu*sum_c M_c."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    ys = np.asarray(source_labels, dtype=np.int64)
    yt = np.asarray(target_pseudo_labels, dtype=np.int64)
    M = (1.0 - mu) * marginal_mmd(ys.size, yt.size)
    for c in range(1, class_count + 1):
        M += mu * conditional_mmd(ys, yt, c, class_count)
    return MmdOperator(M=M, mu=float(mu))


def _domain_separator_error(X_s, X_t):
    """Training error of a ridge least-squares separator of domain membership.

    Targets are +1 (source) / -1 (target); the classifier thresholds at 0
    and the error is counted on the training set itself. Solved in whichever
    of primal/dual space is smaller; both give the same minimizer.
    """
    Z = np.vstack([X_s, X_t])
    Z = np.hstack([Z, np.ones((Z.shape[0], 1))])  # intercept column
    y = np.concatenate([np.ones(X_s.shape[0]), -np.ones(X_t.shape[0])])
    n, d = Z.shape
    if d <= n:
        w = np.linalg.solve(Z.T @ Z + _SEPARATOR_RIDGE * np.eye(d), Z.T @ y)
        scores = Z @ w
    else:
        alpha = np.linalg.solve(Z @ Z.T + _SEPARATOR_RIDGE * np.eye(n), y)
        scores = Z @ (Z.T @ alpha)
    pred = np.where(scores >= 0.0, 1.0, -1.0)
    return float(np.mean(pred != y))


def _proxy_a_distance(X_s, X_t):
    err = _domain_separator_error(X_s, X_t)
    return float(np.clip(2.0 * (1.0 - 2.0 * err), 0.0, 2.0))


def estimate_mu(X_s, X_t, source_labels, target_pseudo_labels, class_count=None):
    """Adaptive balance between marginal and conditional alignment.

    Proxy A-distances d = 2*(1 - 2*err) are computed from the domain
    separator on all data (d_M) and on each class-c subset (d_c, skipping
    classes empty on either side), each clamped to [0, 2];
    mu = 1 - d_M / (d_M + sum_c d_c), or 0.5 when the total is negligible.
    """
    X_s = np.asarray(X_s, dtype=np.float64)
    X_t = np.asarray(X_t, dtype=np.float64)
    if X_s.shape[0] < 1 or X_t.shape[0] < 1:
        raise ValueError("both domains must be nonempty")
    ys = np.asarray(source_labels, dtype=np.int64)
    yt = np.asarray(target_pseudo_labels, dtype=np.int64)
    C = class_count if class_count is not None else int(max(ys.max(), yt.max()))

    d_m = _proxy_a_distance(X_s, X_t)
    d_cond = 0.0
    for c in range(1, C + 1):
        src = ys == c
        tgt = yt == c
        if not src.any() or not tgt.any():
            continue
        d_cond += _proxy_a_distance(X_s[src], X_t[tgt])
    total = d_m + d_cond
    if total < 1e-12:
        return 0.5
    return float(np.clip(1.0 - d_m / total, 0.0, 1.0))
