"""Shared fixtures and independent oracles used across the test suite."""

import numpy as np

from distalign import FeatureDataset, make_task


def make_covariate_shift_task(seed, n_per=100, sep=4.0, sigma=0.5, shift=(2.0, 2.0)):
    """Two 2-D Gaussian classes; the target is the source translated by `shift`."""
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [sep, 0.0]])
    ys = np.repeat([1, 2], n_per)
    Xs = centers[ys - 1] + sigma * rng.standard_normal((2 * n_per, 2))
    yt = np.repeat([1, 2], n_per)
    Xt = centers[yt - 1] + np.asarray(shift) + sigma * rng.standard_normal((2 * n_per, 2))
    src = FeatureDataset(X=Xs, labels=ys, domain_name="synthetic-src", class_count=2)
    tgt = FeatureDataset(X=Xt, labels=yt, domain_name="synthetic-tgt", class_count=2)
    return make_task(src, tgt)


def brute_force_1nn_accuracy(X_train, y_train, X_new, y_new):
    """Per-sample nearest-neighbor classification with explicit loops."""
    correct = 0
    for row, truth in zip(X_new, y_new):
        best, best_dist = None, np.inf
        for other, lab in zip(X_train, y_train):
            dist = float(np.linalg.norm(row - other))
            if dist < best_dist:
                best, best_dist = lab, dist
        correct += int(best == truth)
    return correct / len(X_new)


def lattice_points(rng, n, d, spacing=2.0, jitter=0.25):
    """Well-separated random points: jittered cells of a regular lattice."""
    m = int(np.ceil(n ** (1.0 / d)))
    cells = rng.choice(m**d, size=n, replace=False)
    coords = np.stack(np.unravel_index(cells, (m,) * d), axis=1).astype(np.float64)
    return coords * spacing + rng.uniform(-jitter, jitter, size=(n, d))


def quadratic_objective(K, M, L, a, Y, beta, lam, rho, eta):
    """The explicit training objective the closed-form solver minimizes."""
    F = K @ beta
    srm = float(np.sum(a[:, None] * (F - Y) ** 2))
    reg = eta * float(np.trace(beta.T @ K @ beta))
    align = lam * float(np.trace(F.T @ M @ F))
    smooth = rho * float(np.trace(F.T @ L @ F))
    return srm + reg + align + smooth


def gd_quadratic_solve(K, M, L, a, Y, lam, rho, eta, rel_tol=3e-8, max_iters=300000):
    """Steepest descent with exact line search on the explicit quadratic.

    Independent of the closed form: it only evaluates the objective's
    gradient. The stopping rule bounds the solution error through the
    smallest Hessian eigenvalue, so the returned point is well inside the
    comparison tolerance whenever the quadratic is strictly convex.
    """
    S = np.diag(a) + lam * M + rho * L
    H = K @ S @ K + eta * K
    H = 0.5 * (H + H.T)
    b = K @ (a[:, None] * Y)
    lam_min = float(np.linalg.eigvalsh(H).min())
    if lam_min <= 0.0:
        raise ValueError("quadratic is not strictly convex; oracle needs a full-rank kernel")
    beta = np.zeros_like(Y)
    for _ in range(max_iters):
        g = H @ beta - b
        if np.linalg.norm(g) / lam_min <= rel_tol * max(np.linalg.norm(beta), 1e-12):
            break
        Hg = H @ g
        beta = beta - float(np.sum(g * g) / np.sum(g * Hg)) * g
    return beta


def geodesic_flow_integral(P, Q, steps=2000):
    """Midpoint Riemann sum of the geodesic's projector path.

    The path comes from the tangent map: with log(P, Q) = U S V', the basis
    at parameter t is P V cos(tS) V' + U sin(tS) V'. Projectors B B' are
    basis-invariant, so this integrates the same flow the closed-form kernel
    encodes, through an independent route.
    """
    from distalign import grassmann_log

    delta = grassmann_log(P, Q)
    U, s, Vt = np.linalg.svd(delta, full_matrices=False)
    PV = P.basis @ Vt.T
    acc = np.zeros((P.d, P.d))
    for i in range(steps):
        t = (i + 0.5) / steps
        B = (PV * np.cos(t * s)) @ Vt + (U * np.sin(t * s)) @ Vt
        acc += B @ B.T
    return acc / steps


def random_alignment_instance(rng):
    """A random well-conditioned training system for solver/oracle comparison."""
    from distalign import KernelSpec, build_laplacian, composite_mmd, gram, median_bandwidth

    n_s = int(rng.integers(2, 16))
    n_t = int(rng.integers(2, 16))
    n = n_s + n_t
    C = int(rng.integers(1, 5))
    d = int(rng.integers(2, 5))
    X = lattice_points(rng, n, d)
    K = gram(KernelSpec("rbf", gamma=6.0 * median_bandwidth(X)), X)
    ys = rng.integers(1, C + 1, n_s)
    yt = rng.integers(1, C + 1, n_t)
    M = composite_mmd(ys, yt, float(rng.uniform(0.0, 1.0)), C).M
    L = build_laplacian(X, int(rng.integers(1, 6))).L
    a = np.concatenate([np.ones(n_s), np.zeros(n_t)])
    Y = np.zeros((n, C))
    Y[np.arange(n_s), ys - 1] = 1.0
    params = dict(
        lam=float(rng.uniform(0.0, 10.0)),
        rho=float(rng.uniform(0.0, 2.0)),
        eta=float(rng.uniform(0.3, 1.5)),
    )
    return K, M, L, a, Y, params
