"""Subspace geometry: principal angles, geodesic-flow kernel, Exp/Log maps,
and the sphere/shape geodesic demos.

Subspaces are d x k matrices with orthonormal columns. The geodesic-flow
kernel integrates projections along the subspace geodesic in closed form;
its transform is the feature map of the manifold-based baseline.
"""

from dataclasses import dataclass

import numpy as np

_TINY_ANGLE = 1e-8  # below this the integral's small-angle limits apply

SHAPE_DEMO_GRID = (0.0, 0.05, 0.5, 0.95, 1.0)


def _freeze(a):
    a = np.ascontiguousarray(np.asarray(a, dtype=np.float64))
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Subspace:
    """A k-dimensional subspace of R^d, held as an orthonormal d x k basis."""

    basis: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=np.float64)
        if B.ndim != 2 or B.shape[1] > B.shape[0]:
            raise ValueError(f"basis must be d x k with k <= d, got shape {B.shape}")
        gram_err = np.linalg.norm(B.T @ B - np.eye(B.shape[1]))
        if gram_err > 1e-10:
            raise ValueError(f"basis columns not orthonormal (deviation {gram_err:.2e})")
        object.__setattr__(self, "basis", _freeze(B))

    @property
    def d(self):
        return self.basis.shape[0]

    @property
    def k(self):
        return self.basis.shape[1]


@dataclass(frozen=True)
class PrincipalAngles:
    """Canonical angles between two subspaces, nondecreasing in [0, pi/2]."""

    theta: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=np.float64)
        if t.ndim != 1:
            raise ValueError("angles must be a 1-d sequence")
        if np.any(t < -1e-12) or np.any(t > np.pi / 2 + 1e-12):
            raise ValueError("angles must lie in [0, pi/2]")
        if np.any(np.diff(t) < -1e-12):
            raise ValueError("angles must be nondecreasing")
        object.__setattr__(self, "theta", _freeze(np.clip(t, 0.0, np.pi / 2)))


@dataclass(frozen=True)
class GfkKernel:
    """The d x d symmetric PSD kernel from the geodesic-flow closed form."""

    G: np.ndarray

    def __post_init__(self):
        G = np.asarray(self.G, dtype=np.float64)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ValueError(f"kernel must be square, got shape {G.shape}")
        if np.linalg.norm(G - G.T) > 1e-8 * max(1.0, np.linalg.norm(G)):
            raise ValueError("kernel must be symmetric")
        object.__setattr__(self, "G", _freeze(0.5 * (G + G.T)))

    @property
    def d(self):
        return self.G.shape[0]


def pca_subspace(X, k):
    """Subspace spanned by the top-k right singular vectors of centered X.

    Sign convention: the largest-magnitude entry of each basis column is
    made positive, so the result is deterministic.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if n < 2:
        raise ValueError("PCA needs at least two samples")
    if not 1 <= k <= min(n, d):
        raise ValueError(f"subspace dimension {k} out of range 1..{min(n, d)}")
    Xc = X - X.mean(axis=0)
    _, _, Vt = np.linalg.svd(Xc, full_matrices=False)
    B = Vt[:k].T.copy()
    for j in range(k):
        i = np.argmax(np.abs(B[:, j]))
        if B[i, j] < 0.0:
            B[:, j] = -B[:, j]
    return Subspace(basis=B)


def principal_angles(P, Q):
    """Canonical angles theta_i = arccos(sigma_i) from the SVD of P'Q.

    Angles below pi/4 are refined through the sine route (singular values
    of (I - PP')Q): arccos loses half the significant digits near sigma = 1,
    which would put a ~1e-8 noise floor under exactly-equal subspaces.
    """
    if P.d != Q.d or P.k != Q.k:
        raise ValueError(
            f"subspace shapes differ: ({P.d}, {P.k}) vs ({Q.d}, {Q.k})"
        )
    c = np.linalg.svd(P.basis.T @ Q.basis, compute_uv=False)
    theta = np.arccos(np.clip(c, 0.0, 1.0))
    resid = Q.basis - P.basis @ (P.basis.T @ Q.basis)
    s_asc = np.linalg.svd(resid, compute_uv=False)[::-1]
    small = c > np.sqrt(0.5)
    theta[small] = np.arcsin(np.clip(s_asc[small], 0.0, 1.0))
    return PrincipalAngles(theta=theta)


def orthonormal_complement(P):
    """A deterministic orthonormal basis of the complement of P, via full QR."""
    Qfull, _ = np.linalg.qr(P.basis, mode="complete")
    return Qfull[:, P.k :]


def gfk_kernel(P_S, P_T, complement=None):
    """Closed-form geodesic-flow kernel between a source and target subspace.

    With R_S a complement of P_S, the paired SVDs P_S'P_T = U1 Gam V' and
    R_S'P_T = -U2 Sig V' give angles theta; the kernel is the quadratic form
    of the diagonal blocks
        L1 = 1 + sin(2t)/(2t), L2 = (cos(2t) - 1)/(2t), L3 = 1 - sin(2t)/(2t)
    in the rotated basis [P_S U1, R_S U2]. Angles below 1e-8 use the limits
    L1 -> 2, L2 -> 0, L3 -> 0, so identical subspaces give G = 2 P P'.
    """
    if P_S.d != P_T.d or P_S.k != P_T.k:
        raise ValueError("subspaces must share d and k")
    d, k = P_S.d, P_S.k
    if 2 * k > d:
        raise ValueError(f"need 2k <= d for the complement construction, got k={k}, d={d}")
    if complement is None:
        R = orthonormal_complement(P_S)
    else:
        R = np.asarray(complement, dtype=np.float64)
        if R.shape != (d, d - k):
            raise ValueError(f"complement must be {d}x{d - k}, got {R.shape}")
        if np.linalg.norm(R.T @ R - np.eye(d - k)) > 1e-8 or np.linalg.norm(R.T @ P_S.basis) > 1e-8:
            raise ValueError("complement is not an orthonormal complement of the source basis")

    U1, sig, V1t = np.linalg.svd(P_S.basis.T @ P_T.basis)
    theta = np.arccos(np.clip(sig, 0.0, 1.0))
    sin_t = np.sin(theta)

    # Columns of W are -U2 * sin(theta); their norms must match sin(theta).
    W = R.T @ P_T.basis @ V1t.T
    col_norms = np.linalg.norm(W, axis=0)
    if np.any(np.abs(col_norms - sin_t) > 1e-6):
        raise ValueError("degenerate SVD pair: complement projection inconsistent with angles")
    U2 = np.zeros((d - k, k))
    big = sin_t > _TINY_ANGLE
    U2[:, big] = -W[:, big] / sin_t[big]

    l1 = np.full(k, 2.0)
    l2 = np.zeros(k)
    l3 = np.zeros(k)
    l1[big] = 1.0 + np.sin(2.0 * theta[big]) / (2.0 * theta[big])
    l2[big] = (np.cos(2.0 * theta[big]) - 1.0) / (2.0 * theta[big])
    l3[big] = 1.0 - np.sin(2.0 * theta[big]) / (2.0 * theta[big])

    A = P_S.basis @ U1
    B = R @ U2
    G = (A * l1) @ A.T + (A * l2) @ B.T + (B * l2) @ A.T + (B * l3) @ B.T
    return GfkKernel(G=0.5 * (G + G.T))


def gfk_transform(G, X):
    """Map rows of X through the symmetric square root of the kernel.

    Negative eigenvalues (numerical noise) are clamped to zero before the
    root, so inner products of the output reproduce X G X'.
    """
    Gm = G.G if isinstance(G, GfkKernel) else np.asarray(G, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != Gm.shape[0]:
        raise ValueError(f"feature dimension {X.shape} does not match kernel {Gm.shape}")
    w, V = np.linalg.eigh(Gm)
    root = V @ (np.sqrt(np.clip(w, 0.0, None))[:, None] * V.T)
    return X @ root


def grassmann_log(P, Q):
    """Tangent vector at P pointing to Q (the inverse of the Exp map).

    Computed from the thin SVD of (I - PP')Q(P'Q)^-1 as U arctan(S) V'.
    Raises on cut-locus input, where P'Q is singular.
    """
    if P.d != Q.d or P.k != Q.k:
        raise ValueError("subspaces must share d and k")
    PtQ = P.basis.T @ Q.basis
    sv = np.linalg.svd(PtQ, compute_uv=False)
    if sv[-1] < 1e-12:
        raise ValueError("cut-locus input: subspaces contain mutually orthogonal directions")
    Mat = np.linalg.solve(PtQ.T, (Q.basis - P.basis @ PtQ).T).T
    U, s, Vt = np.linalg.svd(Mat, full_matrices=False)
    return (U * np.arctan(s)) @ Vt


def grassmann_exp(P, Delta):
    """Geodesic endpoint reached from P along the horizontal tangent Delta.

    Delta is projected onto the horizontal space (P'Delta = 0) first; the
    result is re-orthonormalized with a sign-fixed QR so it is a valid basis.
    """
    D = np.asarray(Delta, dtype=np.float64)
    if D.shape != P.basis.shape:
        raise ValueError(f"tangent must match basis shape {P.basis.shape}, got {D.shape}")
    D = D - P.basis @ (P.basis.T @ D)
    U, s, Vt = np.linalg.svd(D, full_matrices=False)
    Y = P.basis @ (Vt.T * np.cos(s)) @ Vt + (U * np.sin(s)) @ Vt
    Qb, Rb = np.linalg.qr(Y)
    signs = np.sign(np.diag(Rb))
    signs[signs == 0.0] = 1.0
    return Subspace(basis=Qb * signs)


def sphere_geodesic(p1, p2, t):
    """Point at parameter t on the great-circle arc from p1 to p2.

    Both endpoints must be unit vectors; antipodal pairs are rejected since
    the arc is then undefined. Nearly identical endpoints return p1.
    """
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if abs(np.linalg.norm(p1) - 1.0) > 1e-10 or abs(np.linalg.norm(p2) - 1.0) > 1e-10:
        raise ValueError("geodesic endpoints must be unit vectors")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    cosw = float(np.clip(np.dot(p1, p2), -1.0, 1.0))
    omega = np.arccos(cosw)
    if np.pi - omega < 1e-8:
        raise ValueError("antipodal endpoints have no unique geodesic")
    if omega < 1e-8:
        return p1.copy()
    sinw = np.sin(omega)
    return (np.sin((1.0 - t) * omega) * p1 + np.sin(t * omega) * p2) / sinw


def _canonical_order(pts):
    """Permutation putting landmarks counterclockwise from the rightmost point.

    The input is taken as a closed polygon in traversal order; the signed
    area fixes the direction and the lexicographically largest (x, y) point
    the starting index.
    """
    x, y = pts[:, 0], pts[:, 1]
    area2 = float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    idx = np.arange(pts.shape[0])
    if area2 < 0.0:
        idx = idx[::-1]
    ordered = pts[idx]
    start = int(np.lexsort((ordered[:, 1], ordered[:, 0]))[-1])
    return np.roll(idx, -start)


def _preshape(pts):
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    scale = float(np.linalg.norm(centered))
    if scale < 1e-12:
        raise ValueError("degenerate shape with zero scatter")
    return centered / scale, centroid, scale


def shape_geodesic(src_landmarks, tgt_landmarks, t):
    """Interpolate two planar landmark shapes along the pre-shape sphere.

    Each shape is centered and scaled to unit Frobenius norm; landmark
    correspondence comes from counterclockwise traversal starting at the
    rightmost point; the flattened pre-shapes follow the great-circle arc
    and the result is rescaled to the linear blend of the original
    centroids and scales. Output rows correspond to the source input rows,
    so t=0 reproduces the source exactly.
    """
    src = np.asarray(src_landmarks, dtype=np.float64)
    tgt = np.asarray(tgt_landmarks, dtype=np.float64)
    if src.ndim != 2 or src.shape[1] != 2 or src.shape != tgt.shape:
        raise ValueError(f"landmark sets must be matching N x 2 arrays, got {src.shape} vs {tgt.shape}")
    perm_s = _canonical_order(src)
    perm_t = _canonical_order(tgt)
    zs, cen_s, scale_s = _preshape(src[perm_s])
    zt, cen_t, scale_t = _preshape(tgt[perm_t])
    z = sphere_geodesic(zs.ravel(), zt.ravel(), t).reshape(src.shape)
    blend_scale = (1.0 - t) * scale_s + t * scale_t
    blend_cen = (1.0 - t) * cen_s + t * cen_t
    out = np.empty_like(src)
    out[perm_s] = z * blend_scale + blend_cen
    return out


def square_landmarks(n=64, half_side=1.0):
    """n points on a square boundary, counterclockwise from the (1, 1) corner."""
    corners = half_side * np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=np.float64)
    seg = np.roll(corners, -1, axis=0) - corners
    side = 2.0 * half_side
    s = np.arange(n) / n * 4.0 * side
    edge = np.minimum((s // side).astype(int), 3)
    frac = (s - edge * side) / side
    return corners[edge] + frac[:, None] * seg[edge]


def circle_landmarks(n=64, radius=1.0):
    """n points on a circle, counterclockwise from the rightmost point."""
    ang = 2.0 * np.pi * np.arange(n) / n
    return radius * np.column_stack([np.cos(ang), np.sin(ang)])


_SPHERE_DEMO_P1 = np.array([0.95, 0.2, 0.24])
_SPHERE_DEMO_P2 = np.array([-0.15, 0.82, 0.55])


def _shape_chord(src, tgt, t):
    """Straight-chord interpolation of pre-shapes, renormalized afterwards."""
    perm_s = _canonical_order(src)
    perm_t = _canonical_order(tgt)
    zs, cen_s, scale_s = _preshape(src[perm_s])
    zt, cen_t, scale_t = _preshape(tgt[perm_t])
    z = (1.0 - t) * zs + t * zt
    z = z / np.linalg.norm(z)
    out = np.empty_like(src)
    out[perm_s] = z * ((1.0 - t) * scale_s + t * scale_t) + (1.0 - t) * cen_s + t * cen_t
    return out


def demo_emit(kind, out_path, steps=None, ts=None):
    """Sample the true geodesic and a naive chord-then-project path to CSV.

    ``kind`` is "sphere" (two fixed unit 3-vectors) or "shape" (a 64-point
    square morphing into a circle). The sampling grid is ``ts`` if given,
    else ``steps`` evenly spaced parameters; the shape demo defaults to the
    grid (0, 0.05, 0.5, 0.95, 1). CSV columns: curve, t, c0, c1, ...

    Returns the emitted rows as (curve, t, coords) tuples.
    """
    if ts is not None:
        grid = [float(t) for t in ts]
    elif steps is not None:
        if steps < 2:
            raise ValueError("need at least two sample steps")
        grid = list(np.linspace(0.0, 1.0, steps))
    elif kind == "shape":
        grid = list(SHAPE_DEMO_GRID)
    else:
        grid = list(np.linspace(0.0, 1.0, 50))

    rows = []
    if kind == "sphere":
        p1 = _SPHERE_DEMO_P1 / np.linalg.norm(_SPHERE_DEMO_P1)
        p2 = _SPHERE_DEMO_P2 / np.linalg.norm(_SPHERE_DEMO_P2)
        for t in grid:
            rows.append(("geodesic", t, sphere_geodesic(p1, p2, t)))
        for t in grid:
            chord = (1.0 - t) * p1 + t * p2
            rows.append(("naive", t, chord / np.linalg.norm(chord)))
    elif kind == "shape":
        src = square_landmarks()
        tgt = circle_landmarks()
        for t in grid:
            rows.append(("geodesic", t, shape_geodesic(src, tgt, t).ravel()))
        for t in grid:
            rows.append(("naive", t, _shape_chord(src, tgt, t).ravel()))
    else:
        raise ValueError(f"unknown demo kind {kind!r}")

    width = rows[0][2].size
    with open(out_path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("curve,t," + ",".join(f"c{i}" for i in range(width)) + "\n")
        for curve, t, coords in rows:
            fh.write("%s,%.17g,%s\n" % (curve, t, ",".join("%.17g" % v for v in coords)))
    return rows
