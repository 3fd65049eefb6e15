"""The distribution-alignment classifier.

Structural risk minimization on the labeled source plus an MMD alignment
penalty and a graph-Laplacian smoothness penalty, solved in closed form
over the stacked source+target rows and refined by iterated pseudo-labels.
"""

from dataclasses import dataclass, field

import numpy as np

from .kernels import KernelSpec, gram, resolve_kernel
from .mmd import composite_mmd, estimate_mu


@dataclass(frozen=True)
class AlignmentConfig:
    """Hyperparameters of the alignment classifier.

    ``lam`` weights the MMD alignment term, ``rho`` the Laplacian term,
    ``eta`` the ridge term (must stay positive so the solve is well posed),
    ``p`` is the neighbor count of the similarity graph and ``iterations``
    the number of pseudo-label refinement passes. ``mu_mode`` selects the
    adaptive balance estimator or a fixed value in [0, 1].
    """

    lam: float = 10.0
    rho: float = 1.0
    eta: float = 0.1
    p: int = 10
    iterations: int = 10
    kernel: KernelSpec = field(default_factory=KernelSpec)
    mu_mode: str = "adaptive"
    mu_value: float | None = None

    def __post_init__(self):
        if self.lam < 0.0:
            raise ValueError(f"alignment weight must be >= 0, got {self.lam}")
        if self.rho < 0.0:
            raise ValueError(f"laplacian weight must be >= 0, got {self.rho}")
        if not self.eta > 0.0:
            raise ValueError(f"ridge weight must be > 0, got {self.eta}")
        if self.p < 1:
            raise ValueError(f"graph neighbor count must be >= 1, got {self.p}")
        if self.iterations < 1:
            raise ValueError(f"iteration count must be >= 1, got {self.iterations}")
        if self.mu_mode not in ("adaptive", "fixed"):
            raise ValueError(f"unknown mu mode {self.mu_mode!r}")
        if self.mu_mode == "fixed":
            if self.mu_value is None or not 0.0 <= self.mu_value <= 1.0:
                raise ValueError(f"fixed mu must lie in [0, 1], got {self.mu_value}")


@dataclass(frozen=True)
class GraphLaplacian:
    """Normalized Laplacian of the p-nearest-neighbor cosine-similarity graph."""

    L: np.ndarray


@dataclass(frozen=True)
class IterationStats:
    mu: float
    pseudo_label_churn: int
    target_accuracy: float | None


@dataclass(frozen=True)
class TrainedAligner:
    """Fitted coefficients plus everything needed to score new points."""

    beta: np.ndarray
    X_train: np.ndarray
    kernel: KernelSpec
    class_count: int
    target_pseudo_labels: np.ndarray
    diagnostics: tuple


def build_laplacian(X, p):
    """Normalized Laplacian L = I - D^(-1/2) W D^(-1/2) of the p-NN cosine graph.

    Affinities are cosine similarities clamped to >= 0, kept where j is among
    i's p nearest by cosine distance and symmetrized by max. Vertices left
    with zero degree get an all-zero row and column (including the diagonal).
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if n < 2:
        raise ValueError("graph construction needs at least two samples")
    p = min(p, n - 1)

    norms = np.linalg.norm(X, axis=1)
    unit = X / np.maximum(norms, 1e-300)[:, None]
    S = unit @ unit.T
    sel = S.copy()
    np.fill_diagonal(sel, -np.inf)
    keep = np.zeros((n, n), dtype=bool)
    order = np.argsort(-sel, axis=1, kind="stable")[:, :p]
    np.put_along_axis(keep, order, True, axis=1)

    W = np.where(keep, np.maximum(S, 0.0), 0.0)
    np.fill_diagonal(W, 0.0)
    W = np.maximum(W, W.T)

    deg = W.sum(axis=1)
    pos = deg > 0.0
    inv_sqrt = np.zeros(n)
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    L = -(inv_sqrt[:, None] * W * inv_sqrt[None, :])
    L[np.diag_indices(n)] = np.where(pos, 1.0, 0.0)
    L = 0.5 * (L + L.T)
    return GraphLaplacian(L=L)


def solve_beta(K, M, L, source_mask, Y_onehot, lam, rho, eta):
    """Closed-form coefficients beta = ((A + lam*M + rho*L) K + eta*I)^-1 A Y.

    ``source_mask`` is the diagonal of the 0/1 selector A (1 exactly on
    source rows). Y_onehot must have one-hot source rows and all-zero target
    rows. Solved as a dense linear system, never by explicit inversion.
    """
    K = np.asarray(K, dtype=np.float64)
    n = K.shape[0]
    a = np.asarray(source_mask, dtype=np.float64).reshape(-1)
    Y = np.asarray(Y_onehot, dtype=np.float64)
    for name, mat in (("K", K), ("M", M), ("L", L)):
        if mat.shape != (n, n):
            raise ValueError(f"{name} must be {n}x{n}, got {mat.shape}")
    if a.shape[0] != n or not np.all((a == 0.0) | (a == 1.0)):
        raise ValueError("source_mask must be a length-n 0/1 vector")
    if Y.ndim != 2 or Y.shape[0] != n:
        raise ValueError(f"Y_onehot must have {n} rows, got {Y.shape}")
    row_sums = Y.sum(axis=1)
    src = a == 1.0
    # source rows must carry one-hot targets (a common positive scale is
    # allowed, so scaling the targets scales beta); target rows stay zero
    ok_source = row_sums[src].size == 0 or (
        row_sums[src].min() > 0.0
        and np.allclose(row_sums[src], row_sums[src][0], rtol=1e-9, atol=0.0)
    )
    if not ok_source or np.any(Y[~src] != 0.0):
        raise ValueError("Y_onehot rows must sum to 1 on source rows and be zero on target rows")

    H = (np.diag(a) + lam * np.asarray(M) + rho * np.asarray(L)) @ K + eta * np.eye(n)
    rhs = a[:, None] * Y
    try:
        beta = np.linalg.solve(H, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular alignment system: {exc}") from exc
    if not np.all(np.isfinite(beta)):
        raise ValueError("alignment solve produced non-finite coefficients")
    return beta


def one_nn_labels(X_train, y_train, X_new):
    """Labels of the Euclidean nearest training row, ties to the first index."""
    X_train = np.asarray(X_train, dtype=np.float64)
    X_new = np.asarray(X_new, dtype=np.float64)
    tt = np.einsum("ij,ij->i", X_train, X_train)
    nn = np.einsum("ij,ij->i", X_new, X_new)
    sq = nn[:, None] + tt[None, :] - 2.0 * (X_new @ X_train.T)
    return np.asarray(y_train)[np.argmin(sq, axis=1)]


def _onehot(labels, class_count):
    Y = np.zeros((labels.shape[0], class_count))
    Y[np.arange(labels.shape[0]), labels - 1] = 1.0
    return Y


def fit(task, config=None):
    """Train the alignment classifier on a source/target task.

    Pseudo-labels start from 1-NN source predictions and are refined for
    ``config.iterations`` rounds: estimate the balance factor, assemble the
    MMD operator, solve for beta and re-predict the target rows. The graph
    Laplacian and Gram matrix depend only on the features and are computed
    once. Deterministic for fixed inputs and config.
    """
    config = config or AlignmentConfig()
    Xs, ys = task.source.X, task.source.labels
    Xt, yt = task.target.X, task.target.labels
    C = task.class_count
    n_s, n_t = Xs.shape[0], Xt.shape[0]
    X = np.vstack([Xs, Xt])
    n = n_s + n_t

    kernel = resolve_kernel(config.kernel, X)
    K = gram(kernel, X)
    L = build_laplacian(X, config.p).L if config.rho > 0.0 else np.zeros((n, n))
    mask = np.concatenate([np.ones(n_s), np.zeros(n_t)])
    Y = np.vstack([_onehot(ys, C), np.zeros((n_t, C))])

    pseudo = one_nn_labels(Xs, ys, Xt)
    beta = None
    diagnostics = []
    for _ in range(config.iterations):
        if config.mu_mode == "fixed":
            mu = float(config.mu_value)
        else:
            mu = estimate_mu(Xs, Xt, ys, pseudo, C)
        op = composite_mmd(ys, pseudo, mu, C)
        beta = solve_beta(K, op.M, L, mask, Y, config.lam, config.rho, config.eta)
        new_pseudo = np.argmax(K[n_s:] @ beta, axis=1) + 1
        churn = int(np.sum(new_pseudo != pseudo))
        acc = float(np.mean(new_pseudo == yt)) if yt is not None else None
        pseudo = new_pseudo
        diagnostics.append(IterationStats(mu=mu, pseudo_label_churn=churn, target_accuracy=acc))

    return TrainedAligner(
        beta=beta,
        X_train=X,
        kernel=kernel,
        class_count=C,
        target_pseudo_labels=pseudo,
        diagnostics=tuple(diagnostics),
    )


def predict(aligner, X_new):
    """Score new rows against the trained coefficients.

    Returns (labels, scores): scores are gram(kernel, train, new)' beta and
    labels the per-row argmax, ties broken toward the smallest class id.
    """
    X_new = np.asarray(X_new, dtype=np.float64)
    if X_new.ndim != 2 or X_new.shape[1] != aligner.X_train.shape[1]:
        raise ValueError(
            f"expected {aligner.X_train.shape[1]} features, got shape {X_new.shape}"
        )
    scores = gram(aligner.kernel, aligner.X_train, X_new).T @ aligner.beta
    labels = np.argmax(scores, axis=1) + 1
    return labels, scores


def confusion_matrix(true_labels, predicted_labels, class_count):
    """C x C matrix with entry (i, j) = count of true class i+1 predicted j+1."""
    true_labels = np.asarray(true_labels, dtype=np.int64)
    predicted_labels = np.asarray(predicted_labels, dtype=np.int64)
    cm = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(cm, (true_labels - 1, predicted_labels - 1), 1)
    return cm


def evaluate(aligner, labeled_target):
    """Accuracy in [0, 1] and the confusion matrix on a labeled target set."""
    if not labeled_target.is_labeled:
        raise ValueError("evaluation requires target labels")
    pred, _ = predict(aligner, labeled_target.X)
    acc = float(np.mean(pred == labeled_target.labels))
    return acc, confusion_matrix(labeled_target.labels, pred, aligner.class_count)
