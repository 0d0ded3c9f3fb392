"""Dense small-matrix kernels and orientation-consistent tangent bases
for the cylinder R x S^(k-1).

The cylinder is oriented by the boundary orientation of the unit
sphere: at a base point v, the ordered basis (v, w_1, ..., w_{k-1}) of
R^k is positive. For k = 1 the sphere is {-1, +1} and the orientation
degenerates to the sign of v, carried in ``orientation_sign``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvarianceError, NormalizationError

DEFAULT_RANK_TOL = 1e-10


def _as_square(M, what):
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{what} needs a square matrix, got shape {A.shape}")
    return A


def det(M):
    """Determinant via partially pivoted elimination (LAPACK)."""
    return float(np.linalg.det(_as_square(M, "det")))


def nullspace(M, tol=DEFAULT_RANK_TOL):
    """Orthonormal basis of the numerical kernel of M.

    Singular directions with singular value < tol * ||M|| are kept;
    an invertible M yields an empty list. Vector signs are fixed
    deterministically (largest-magnitude component positive).
    """
    A = _as_square(M, "nullspace")
    _, s, vt = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    vecs = []
    for i in range(A.shape[0]):
        if s[i] < tol * smax or smax == 0.0:
            w = vt[i]
            j = int(np.argmax(np.abs(w)))
            if w[j] < 0:
                w = -w
            vecs.append(w)
    return vecs


def image_restriction(T, tol=DEFAULT_RANK_TOL):
    """Orthonormal basis B of Im T and the matrix of T|_(Im T) in B.

    Im T must be (numerically) invariant under T, which holds whenever
    the kernel of T complements the image. The sign of det of the
    returned square matrix is basis-independent.
    """
    A = _as_square(T, "image_restriction")
    u, s, _ = np.linalg.svd(A)
    smax = s[0] if len(s) else 0.0
    r = int(np.sum(s >= tol * smax)) if smax > 0.0 else 0
    B = u[:, :r]
    That = B.T @ A @ B
    resid = np.linalg.norm(A @ B - B @ That)
    if resid > max(tol, 1e-8) * max(1.0, smax):
        raise InvarianceError(
            f"image of T is not T-invariant within tolerance (residual {resid:.3e})"
        )
    return [B[:, i].copy() for i in range(r)], That


@dataclass(frozen=True)
class TangentBasis:
    """Oriented basis of the tangent space of R x S at (lambda, v).

    ``vectors`` are (lambda_dot, v_dot) pairs: first (1, 0), then
    (0, w_i) with the w_i orthonormal and perpendicular to v.
    """

    base_point: tuple  # (lambda, v)
    vectors: tuple  # ((1.0, zero), (0.0, w_1), ...)
    orientation_sign: int = 1


def oriented_tangent_basis(lam, v):
    """Tangent basis at (lam, v) realizing the chosen cylinder orientation.

    Gram-Schmidt of the standard basis against v (skipping the
    coordinate of max |v_i|); if det[v w_1 ... w_{k-1}] < 0 the last
    tangent vector is negated.
    """
    v = np.asarray(v, dtype=float)
    k = v.shape[0]
    nrm = np.linalg.norm(v)
    if nrm < 1e-8:
        raise NormalizationError("base vector is too close to zero")
    if abs(nrm - 1.0) > 1e-10:
        raise NormalizationError(f"base vector is not unit length (|v| = {nrm!r})")
    if k == 1:
        sign = 1 if v[0] > 0 else -1
        return TangentBasis((float(lam), v.copy()), ((1.0, np.zeros(1)),), sign)

    skip = int(np.argmax(np.abs(v)))
    ws = []
    for j in range(k):
        if j == skip:
            continue
        w = np.zeros(k)
        w[j] = 1.0
        w -= (w @ v) * v
        for prev in ws:
            w -= (w @ prev) * prev
        w /= np.linalg.norm(w)
        ws.append(w)
    frame = np.column_stack([v] + ws)
    if np.linalg.det(frame) < 0:
        ws[-1] = -ws[-1]
    vectors = [(1.0, np.zeros(k))] + [(0.0, w) for w in ws]
    return TangentBasis((float(lam), v.copy()), tuple(vectors), 1)
