"""Eigenpoints, eigensets, and their degrees for the problem
Lv = lambda v on the unit sphere.

The degree of an isolated eigenpoint is computed two independent ways:
half the sign-jump of the characteristic polynomial, and the sign of
the determinant of the differential on an oriented tangent basis. The
degree of a whole eigenset is the full sign-jump, and the degree over
an interval (a, b) is sign P(b) - sign P(a).
"""

from dataclasses import dataclass

import numpy as np

from . import linalg, poly
from .errors import (
    AdmissibilityError,
    DegenerateDifferentialError,
    NotARootError,
    NotIsolatedError,
)

SIGN_JUMP_FORMULA = "SignJumpFormula"
DIFFERENTIAL_ORACLE = "DifferentialOracle"

_ROOT_CACHE = {}


def _poly_and_roots(A):
    """Characteristic polynomial and its real roots, memoized by matrix."""
    key = (A.shape[0], A.tobytes())
    hit = _ROOT_CACHE.get(key)
    if hit is None:
        P = poly.char_poly(A)
        hit = (P, tuple(poly.real_roots(P)))
        if len(_ROOT_CACHE) > 256:
            _ROOT_CACHE.clear()
        _ROOT_CACHE[key] = hit
    return hit


@dataclass(frozen=True)
class Eigenpoint:
    """A pair (lambda, v) with v a unit eigenvector of the operator."""

    lam: float
    v: np.ndarray


@dataclass(frozen=True)
class Eigenset:
    """The slice {lambda} x S_lambda with multiplicity metadata.

    ``representative_eigenpoints`` holds the two antipodal eigenpoints
    when the geometric multiplicity is 1, otherwise a deterministic
    sampling of the eigensphere (diagnostics only).
    """

    lam: float
    algebraic_multiplicity: int
    geometric_multiplicity: int
    kernel_basis: tuple
    representative_eigenpoints: tuple
    root: poly.RealRoot


@dataclass(frozen=True)
class DegreeValue:
    value: int
    method: str


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of perturbing L and re-reading the interval degree."""

    values: frozenset
    trials: int
    skipped_inadmissible: int
    violation: bool


def _sample_sphere(basis):
    """Deterministic grid on the unit sphere spanned by an orthonormal basis."""
    pts = []
    for w in basis:
        pts.append(w)
        pts.append(-w)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for t in (1.0, -1.0):
                pts.append((basis[i] + t * basis[j]) / np.sqrt(2.0))
    return pts


def eigensets(L, tol=linalg.DEFAULT_RANK_TOL):
    """All eigensets of L, sorted by eigenvalue."""
    A = np.asarray(L, dtype=float)
    _, roots = _poly_and_roots(A)
    out = []
    for root in roots:
        kernel = nullspace_at(A, root.value, tol)
        geo = len(kernel)
        if geo == 1:
            reps = (
                Eigenpoint(root.value, kernel[0]),
                Eigenpoint(root.value, -kernel[0]),
            )
        else:
            reps = tuple(Eigenpoint(root.value, w) for w in _sample_sphere(kernel))
        out.append(
            Eigenset(
                lam=root.value,
                algebraic_multiplicity=root.multiplicity,
                geometric_multiplicity=geo,
                kernel_basis=tuple(kernel),
                representative_eigenpoints=reps,
                root=root,
            )
        )
    return out


def nullspace_at(L, lam, tol=linalg.DEFAULT_RANK_TOL):
    """Orthonormal kernel basis of L - lam*I."""
    A = np.asarray(L, dtype=float)
    kernel = linalg.nullspace(A - lam * np.eye(A.shape[0]), tol)
    if not kernel:
        raise NotARootError(f"{lam!r} is not an eigenvalue within tolerance")
    return kernel


def _root_at(roots, lam):
    for root in roots:
        if root.isolating_interval[0] < lam < root.isolating_interval[1]:
            return root
    raise NotARootError(f"{lam!r} is not an eigenvalue within tolerance")


def ldegree_eigenpoint_formula(L, p):
    """Degree of an isolated eigenpoint: half the sign-jump at lambda.

    Only defined when the geometric multiplicity is 1, so that (lam, v)
    is isolated in the solution set.
    """
    A = np.asarray(L, dtype=float)
    if len(nullspace_at(A, p.lam)) != 1:
        raise NotIsolatedError(
            "eigenpoint is not isolated (geometric multiplicity > 1); "
            "use the eigenset degree"
        )
    P, roots = _poly_and_roots(A)
    root = _root_at(roots, p.lam)
    jump = poly.sign_jump(P, p.lam, root)
    return DegreeValue(jump // 2, SIGN_JUMP_FORMULA)


def ldegree_eigenpoint_oracle(L, p, tol=linalg.DEFAULT_RANK_TOL):
    """Degree of an isolated eigenpoint from the differential's sign.

    Applies the differential (lam_dot, v_dot) -> (L - lam*I) v_dot
    - lam_dot * v to the oriented tangent basis at (lam, v) and takes
    the sign of the resulting determinant.
    """
    A = np.asarray(L, dtype=float)
    v = np.asarray(p.v, dtype=float)
    k = A.shape[0]
    basis = linalg.oriented_tangent_basis(p.lam, v)
    T = A - p.lam * np.eye(k)
    cols = [T @ v_dot - lam_dot * v for lam_dot, v_dot in basis.vectors]
    M = np.column_stack(cols)
    d = linalg.det(M)
    if abs(d) <= tol * max(1.0, np.linalg.norm(M)):
        raise DegenerateDifferentialError(
            "differential is singular at this eigenpoint; use the "
            "sign-jump formula or the eigenset degree"
        )
    value = (1 if d > 0 else -1) * basis.orientation_sign
    return DegreeValue(value, DIFFERENTIAL_ORACLE)


def ldegree_eigenset(L, es):
    """Degree of the whole eigenset: the sign-jump at its eigenvalue."""
    P, _ = _poly_and_roots(np.asarray(L, dtype=float))
    return DegreeValue(poly.sign_jump(P, es.lam, es.root), SIGN_JUMP_FORMULA)


def interval_degree(L, a, b, tol=poly.DEFAULT_ROOT_TOL):
    """Degree over (a, b) x S: sign P(b) - sign P(a).

    Both endpoints must be admissible, i.e. not eigenvalues of L.
    """
    if not a < b:
        raise AdmissibilityError(f"need a < b, got a={a!r}, b={b!r}")
    P = poly.char_poly(np.asarray(L, dtype=float))
    for x in (a, b):
        if abs(P(x)) <= tol * P.eval_scale(x):
            raise AdmissibilityError(f"endpoint {x!r} is an eigenvalue of L")
    return int(np.sign(P(b)) - np.sign(P(a)))


def degree_stability_probe(L, a, b, radius, trials=100, seed=0):
    """Sample interval degrees of entrywise perturbations of L.

    Perturbations E with max-norm <= radius are drawn from a PRNG
    seeded deterministically; samples whose endpoints become
    inadmissible are skipped. More than one observed value at a radius
    below the admissibility margin is flagged as a violation.
    """
    A = np.asarray(L, dtype=float)
    interval_degree(A, a, b)  # raises if (a, b) is inadmissible for L itself
    rng = np.random.default_rng(seed)
    k = A.shape[0]
    values = set()
    skipped = 0
    for _ in range(trials):
        E = rng.uniform(-radius, radius, size=(k, k))
        try:
            values.add(interval_degree(A + E, a, b))
        except AdmissibilityError:
            skipped += 1
    return StabilityReport(
        values=frozenset(values),
        trials=trials,
        skipped_inadmissible=skipped,
        violation=len(values) > 1,
    )
