"""The perturbed problem Phi(s, lambda, v) = Lv - lambda v + s N(v) on
R x R x S^(k-1): evaluation, analytic Jacobians, pseudo-arclength
continuation of solution branches, trivial-solution detection, branch
classification, and eigenpair-curve extraction for linear N.

A solution triple is (s, lambda, v) with Phi = 0 and ||v|| = 1; the
triples with s = 0 are the trivial solutions (eigenpoints of L).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, linalg, poly, spectral
from .errors import (
    BranchStartError,
    CorrectorFailureError,
    DimensionError,
    InconclusiveBranchError,
    PreconditionError,
    UnsupportedMapError,
)

TRIVIAL_S_TOL = 1e-10
EIGENVALUE_SEPARATION = 1e-6


class NonlinearMap:
    """Polynomial map R^k -> R^k in a flat term representation.

    Terms are stored as parallel arrays (coefficients, exponent rows,
    per-component offsets) so the numerical kernels can evaluate the
    map and its Jacobian without touching Python objects.
    """

    def __init__(self, kind, payload, k):
        self.kind = kind
        self.payload = payload
        self.k = k
        coefs, exps, offsets = [], [], [0]
        for comp in self._components():
            for coef, exp in comp:
                if len(exp) != k:
                    raise DimensionError(
                        f"exponent tuple {exp!r} has length != k = {k}"
                    )
                coefs.append(float(coef))
                exps.append([int(e) for e in exp])
            offsets.append(len(coefs))
        self._coefs = np.asarray(coefs, dtype=float)
        self._exps = np.asarray(exps, dtype=np.int64).reshape(len(coefs), k)
        self._offsets = np.asarray(offsets, dtype=np.int64)

    def _components(self):
        if self.kind == "linear":
            M = self.payload
            return [
                [(M[i, j], tuple(int(j == l) for l in range(self.k)))
                 for j in range(self.k) if M[i, j] != 0.0]
                for i in range(self.k)
            ]
        if self.kind == "constant":
            c = self.payload
            zero = (0,) * self.k
            return [[(c[i], zero)] if c[i] != 0.0 else [] for i in range(self.k)]
        return self.payload

    @classmethod
    def linear(cls, matrix):
        M = np.asarray(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionError(f"linear map needs a square matrix, got {M.shape}")
        return cls("linear", M, M.shape[0])

    @classmethod
    def constant(cls, vector):
        c = np.asarray(vector, dtype=float)
        if c.ndim != 1:
            raise DimensionError(f"constant map needs a vector, got shape {c.shape}")
        return cls("constant", c, c.shape[0])

    @classmethod
    def polynomial(cls, components):
        comps = [[(float(c), tuple(e)) for c, e in comp] for comp in components]
        k = len(comps)
        return cls("polynomial", comps, k)

    def __call__(self, v):
        return _kernels.nl_eval(self._coefs, self._exps, self._offsets,
                                np.asarray(v, dtype=float))

    def jacobian(self, v):
        return _kernels.nl_jac(self._coefs, self._exps, self._offsets,
                               np.asarray(v, dtype=float))


@dataclass(frozen=True)
class Problem:
    """The pair (L, N) defining Phi(s, lambda, v) = Lv - lambda v + s N(v)."""

    k: int
    L: np.ndarray
    N: NonlinearMap
    name: str = ""

    def __post_init__(self):
        L = np.asarray(self.L, dtype=float)
        if L.shape != (self.k, self.k):
            raise DimensionError(f"L has shape {L.shape}, expected ({self.k}, {self.k})")
        if self.N.k != self.k:
            raise DimensionError(f"N acts on R^{self.N.k}, expected R^{self.k}")
        object.__setattr__(self, "L", L)


@dataclass(frozen=True)
class SolutionTriple:
    s: float
    lam: float
    v: np.ndarray


@dataclass(frozen=True)
class ClosedLoop:
    pass


@dataclass(frozen=True)
class UnboundedExceededBound:
    bound: float


@dataclass(frozen=True)
class Stalled:
    reason: str


@dataclass(frozen=True)
class Branch:
    """Arclength-ordered polyline of solution triples."""

    points: tuple
    classification: object
    trivial_solutions_met: tuple
    start: SolutionTriple


@dataclass(frozen=True)
class TraceOptions:
    h0: float = 0.02
    min_step: float = 1e-6
    max_step: float = 0.1
    bound: float = 10.0
    max_points: int = 200000
    newton_tol: float = 1e-12
    max_iter: int = 50


@dataclass(frozen=True)
class PersistenceReport:
    outcome: str  # "Unbounded" | "OtherEigenvalueFound" | "OnlySameEigenvalue"
    other_eigenvalue: float = None
    theorem_violation: bool = False


def phi(prob, s, lam, v):
    """Phi(s, lambda, v) = Lv - lambda v + s N(v)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (prob.k,):
        raise DimensionError(f"v has shape {v.shape}, expected ({prob.k},)")
    N = prob.N
    return _kernels.phi_eval(prob.L, float(s), float(lam), v,
                             N._coefs, N._exps, N._offsets)


def phi_jacobian(prob, s, lam, v):
    """k x (k+2) Jacobian of Phi over (s, lambda, v).

    Columns: dPhi/ds = N(v); dPhi/dlambda = -v; dPhi/dv = L - lambda I
    + s DN(v).
    """
    v = np.asarray(v, dtype=float)
    N = prob.N
    return _kernels.phi_jac(prob.L, float(s), float(lam), v,
                            N._coefs, N._exps, N._offsets)


def _pack(p):
    return np.concatenate(([p.s, p.lam], p.v))


def _unpack(x):
    return SolutionTriple(float(x[0]), float(x[1]), np.asarray(x[2:], dtype=float))


def product_distance(p, q):
    """max(|ds|, |dlambda|, ||dv||) on R x R x S."""
    return max(abs(p.s - q.s), abs(p.lam - q.lam),
               float(np.linalg.norm(p.v - q.v)))


def newton_correct(prob, guess, cnormal, cvalue, tol=1e-12, max_iter=50):
    """Damped Newton on {Phi = 0, <v,v> = 1, affine constraint = 0}.

    ``cnormal``/``cvalue`` give the constraint <cnormal, (s,lambda,v)> =
    cvalue. Converges when the residual drops below tol*(1 + ||L||).
    """
    x0 = _pack(guess) if isinstance(guess, SolutionTriple) else np.asarray(guess, dtype=float)
    N = prob.N
    x, converged, iters, resnorm = _kernels.newton_correct(
        prob.L, N._coefs, N._exps, N._offsets, x0,
        np.asarray(cnormal, dtype=float), float(cvalue), tol, max_iter)
    if not converged:
        raise CorrectorFailureError(
            f"corrector did not converge (residual {resnorm:.3e} after {iters} steps)"
        )
    return _unpack(x)


def _augmented(prob, p):
    """(k+1) x (k+2) matrix [phi_jacobian; sphere-constraint row]."""
    J = phi_jacobian(prob, p.s, p.lam, p.v)
    row = np.zeros(prob.k + 2)
    row[2:] = 2.0 * p.v
    return np.vstack([J, row])


def _tangent(prob, p, prev=None, tol=1e-8):
    """Unit tangent of the solution branch at p, sign-continued from prev.

    Returns (tangent, regular): regular is False when the augmented
    Jacobian has a nullspace of dimension >= 2 (singular branch point).
    """
    A = _augmented(prob, p)
    _, sv, vt = np.linalg.svd(A)
    regular = sv[-1] > tol * max(sv[0], 1.0)
    t = vt[-1]
    if prev is not None and float(t @ prev) < 0.0:
        t = -t
    return t, regular


def _branch_det(prob, p, tangent):
    """det of the square system [phi_jacobian; v-row; tangent-row].

    Its sign flips exactly when the branch crosses a simple singular
    (bifurcation) point, where the augmented Jacobian loses rank.
    """
    A = _augmented(prob, p)
    return linalg.det(np.vstack([A, tangent]))


def _refine_trivial(prob, p, tol, max_iter):
    """Project a branch point onto the trivial slice {s = 0}.

    The corrector converges only linearly at eigenpoints over
    non-simple eigenvalues, so the result is snapped onto the exact
    eigenpoint (nearest eigenvalue, eigenvector projected onto the
    kernel) whenever that moves it by a negligible amount.
    """
    normal = np.zeros(prob.k + 2)
    normal[0] = 1.0
    out = newton_correct(prob, p, normal, 0.0, tol, max_iter)
    try:
        _, roots = spectral._poly_and_roots(prob.L)
        root = min(roots, key=lambda r: abs(r.value - out.lam))
        if abs(root.value - out.lam) < 1e-4:
            kernel = linalg.nullspace(prob.L - root.value * np.eye(prob.k))
            if kernel:
                B = np.column_stack(kernel)
                w = B @ (B.T @ out.v)
                nrm = np.linalg.norm(w)
                if nrm > 0.9 and np.linalg.norm(w / nrm - out.v) < 1e-3:
                    return SolutionTriple(0.0, root.value, w / nrm)
    except Exception:
        pass
    return out


def _record_trivial(trivials, cand):
    for t in trivials:
        if product_distance(t, cand) < EIGENVALUE_SEPARATION:
            return
    trivials.append(cand)


def _bisect_singular(prob, p0, tangent, h, d0, opts):
    """Locate the branch point where _branch_det changes sign in (0, h]."""
    lo, hi = 0.0, h
    best = p0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12 * max(1.0, h):
            break
        x = _pack(p0) + mid * tangent
        try:
            pm = newton_correct(prob, _unpack(x), tangent, float(tangent @ x),
                                opts.newton_tol, opts.max_iter)
        except CorrectorFailureError:
            hi = mid
            continue
        tm, regular = _tangent(prob, pm, tangent)
        if not regular:
            return pm
        if _branch_det(prob, pm, tm) * d0 > 0.0:
            lo, best = mid, pm
        else:
            hi = mid
    return best


def trace_branch(prob, start, opts=None, initial_tangent=None):
    """Pseudo-arclength predictor-corrector trace from a regular point.

    Terminates Unbounded when |s|, |lambda|, or the accumulated
    arclength exceeds its budget; ClosedLoop when the trace returns to
    the start; Stalled on singular points, persistent corrector
    failure, or the point budget.
    """
    opts = opts or TraceOptions()
    res = phi(prob, start.s, start.lam, start.v)
    scale = 1.0 + np.linalg.norm(prob.L)
    if np.linalg.norm(res) > 1e-8 * scale or abs(np.linalg.norm(start.v) - 1) > 1e-8:
        raise BranchStartError("start point does not satisfy the solution invariants")
    tangent, regular = _tangent(prob, start, initial_tangent)
    if not regular:
        raise BranchStartError(
            "augmented Jacobian is singular at the start; perturb the start "
            "(trace_component does this automatically)"
        )
    points = [start]
    trivials = []
    if abs(start.s) <= TRIVIAL_S_TOL:
        _record_trivial(trivials, start)
    d_prev = _branch_det(prob, start, tangent)
    h = opts.h0
    arclength = 0.0
    easy = 0
    classification = None
    while len(points) < opts.max_points:
        cur = points[-1]
        x_pred = _pack(cur) + h * tangent
        try:
            new = newton_correct(prob, _unpack(x_pred), tangent,
                                 float(tangent @ x_pred),
                                 opts.newton_tol, opts.max_iter)
            step = product_distance(new, cur)
            if step > 3.0 * h + 1e-12:
                raise CorrectorFailureError("corrector jumped off the branch")
        except CorrectorFailureError:
            h *= 0.5
            easy = 0
            if h < opts.min_step:
                classification = Stalled("corrector failure at minimum step size")
                break
            continue
        new_tangent, regular = _tangent(prob, new, tangent)
        if not regular:
            points.append(new)
            classification = Stalled("singular branch point")
            break
        d_new = _branch_det(prob, new, new_tangent)
        if d_prev * d_new < 0.0:
            sing = _bisect_singular(prob, cur, tangent, h, d_prev, opts)
            if abs(sing.s) <= 0.2:
                # the singular point may itself sit on the trivial slice
                try:
                    triv = _refine_trivial(prob, sing, opts.newton_tol, opts.max_iter)
                    if abs(triv.s) <= TRIVIAL_S_TOL and \
                            product_distance(triv, sing) < 2.0 * h:
                        _record_trivial(trivials, triv)
                except CorrectorFailureError:
                    pass
            points.append(sing)
            classification = Stalled("singular branch point")
            break
        crossed = cur.s * new.s < 0.0 or abs(new.s) <= TRIVIAL_S_TOL
        touched = (tangent[0] * new_tangent[0] < 0.0
                   and min(abs(cur.s), abs(new.s)) < 0.2)
        if crossed or touched:
            base = cur if abs(cur.s) <= abs(new.s) else new
            try:
                triv = _refine_trivial(prob, base, opts.newton_tol, opts.max_iter)
                if abs(triv.s) <= TRIVIAL_S_TOL and \
                        product_distance(triv, base) < max(2.0 * h, 2.0 * abs(base.s)):
                    _record_trivial(trivials, triv)
            except CorrectorFailureError:
                pass
        arclength += product_distance(new, cur)
        points.append(new)
        tangent, d_prev = new_tangent, d_new
        easy += 1
        if easy >= 4:
            h = min(h * 1.3, opts.max_step)
            easy = 0
        if abs(new.s) > opts.bound or abs(new.lam) > opts.bound \
                or arclength > 20.0 * opts.bound:
            classification = UnboundedExceededBound(opts.bound)
            break
        if arclength > 3.0 * opts.h0 and \
                product_distance(new, start) < opts.h0 / 2.0:
            classification = ClosedLoop()
            break
    if classification is None:
        classification = Stalled("point budget exhausted")
    return Branch(tuple(points), classification, tuple(trivials), start)


def _merge_two_directions(prob, start, opts):
    """Trace forward and backward from a regular start and concatenate."""
    t0, _ = _tangent(prob, start)
    fwd = trace_branch(prob, start, opts, initial_tangent=t0)
    if isinstance(fwd.classification, ClosedLoop):
        return fwd
    bwd = trace_branch(prob, start, opts, initial_tangent=-t0)
    points = tuple(reversed(bwd.points)) + fwd.points[1:]
    trivials = list(bwd.trivial_solutions_met)
    for t in fwd.trivial_solutions_met:
        _record_trivial(trivials, t)
    cls = fwd.classification
    for c in (fwd.classification, bwd.classification):
        if isinstance(c, ClosedLoop):
            cls = c
            break
        if isinstance(c, UnboundedExceededBound):
            cls = c
    return Branch(points, cls, tuple(trivials), start)


def _solve_at_s(prob, s, lam0, v0, tol, max_iter=80):
    """Newton solve of {Phi(s, ., .) = 0, ||v|| = 1} at fixed s."""
    lam, v = float(lam0), np.asarray(v0, dtype=float).copy()
    scale = 1.0 + np.linalg.norm(prob.L)
    for _ in range(max_iter):
        F = np.concatenate([phi(prob, s, lam, v), [v @ v - 1.0]])
        if np.linalg.norm(F) <= tol * scale:
            return SolutionTriple(float(s), lam, v)
        J_full = phi_jacobian(prob, s, lam, v)
        J = np.zeros((prob.k + 1, prob.k + 1))
        J[:prob.k, 0] = J_full[:, 1]
        J[:prob.k, 1:] = J_full[:, 2:]
        J[prob.k, 1:] = 2.0 * v
        try:
            dx = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(dx)):
            break
        lam += dx[0]
        v = v + dx[1:]
    raise CorrectorFailureError(f"no solution found at s = {s!r} near the start")


def trace_component(prob, lam_star, v_star, opts=None):
    """Branches covering the solution component through (0, lam*, v*).

    At a regular trivial start this is a single two-direction trace.
    When the start is singular (non-simple eigenvalue) the trace starts
    instead from nearby non-trivial points solved at s = +-h0, and one
    branch per successful perturbed start is returned.
    """
    opts = opts or TraceOptions()
    v = np.asarray(v_star, dtype=float)
    start = SolutionTriple(0.0, float(lam_star), v / np.linalg.norm(v))
    _, regular = _tangent(prob, start)
    if regular:
        return [_merge_two_directions(prob, start, opts)]
    branches = []
    for s0 in (opts.h0, -opts.h0):
        try:
            near = _solve_at_s(prob, s0, lam_star, start.v, opts.newton_tol)
        except CorrectorFailureError:
            continue
        try:
            branches.append(_merge_two_directions(prob, near, opts))
        except BranchStartError:
            continue
    if not branches:
        raise BranchStartError(
            "no regular start found near the singular trivial solution"
        )
    return branches


def classify_persistence(prob, branch, lambda_star):
    """Outcome of a trace started at a trivial solution over lambda*.

    Unbounded when the trace exceeded its bound; OtherEigenvalueFound
    when a trivial solution with a different eigenvalue was met;
    OnlySameEigenvalue otherwise. The last outcome is flagged as a
    theorem violation when the algebraic multiplicity of lambda* is odd
    (a bounded component must then reach another eigenvalue).
    """
    for t in branch.trivial_solutions_met:
        if abs(t.lam - lambda_star) > EIGENVALUE_SEPARATION:
            return PersistenceReport("OtherEigenvalueFound", float(t.lam), False)
    if isinstance(branch.classification, UnboundedExceededBound):
        return PersistenceReport("Unbounded")
    if isinstance(branch.classification, Stalled):
        raise InconclusiveBranchError(
            f"branch stalled ({branch.classification.reason}); "
            "persistence cannot be classified"
        )
    P, roots = spectral._poly_and_roots(np.asarray(prob.L, dtype=float))
    root = spectral._root_at(roots, lambda_star)
    odd = root.multiplicity % 2 == 1
    return PersistenceReport("OnlySameEigenvalue", None, odd)


def eigenpair_curve_linear(prob, s_range=(-3.0, 3.0), lam_range=(-3.0, 3.0),
                           resolution=200):
    """Sample points of {(s, lambda): det(L + sN - lambda I) = 0}.

    Scans a grid for sign changes of the determinant and bisects each
    sign-change edge; resolution-limited, intended for plotting and
    containment tests. Requires a linear N.
    """
    if prob.N.kind != "linear":
        raise UnsupportedMapError("eigenpair curve extraction needs a linear N")
    Nmat = np.asarray(prob.N.payload, dtype=float)
    eye = np.eye(prob.k)

    def d(s, lam):
        return linalg.det(prob.L + s * Nmat - lam * eye)

    ss = np.linspace(s_range[0], s_range[1], resolution + 1)
    ll = np.linspace(lam_range[0], lam_range[1], resolution + 1)
    vals = np.array([[d(s, lam) for lam in ll] for s in ss])
    pts = []

    def bisect(f, a, b, fa):
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = f(m)
            if fm == 0.0 or b - a < 1e-14 * max(1.0, abs(m)):
                return m
            if fa * fm < 0.0:
                b = m
            else:
                a, fa = m, fm
        return 0.5 * (a + b)

    for i in range(resolution + 1):
        for j in range(resolution + 1):
            if j + 1 <= resolution and vals[i, j] * vals[i, j + 1] < 0.0:
                lam = bisect(lambda x: d(ss[i], x), ll[j], ll[j + 1], vals[i, j])
                pts.append((ss[i], lam))
            if i + 1 <= resolution and vals[i, j] * vals[i + 1, j] < 0.0:
                s = bisect(lambda x: d(x, ll[j]), ss[i], ss[i + 1], vals[i, j])
                pts.append((s, ll[j]))
    return np.array(pts).reshape(len(pts), 2)


def odd_dimension_check(prob, s_samples):
    """Real-eigenvalue witnesses (s, lambda) for each sampled s.

    For odd k the characteristic polynomial of L + sN has odd degree
    and therefore a real root. k = 1 admits any polynomial N (the
    sphere is {-1, +1}); k >= 3 requires a linear N so that the
    eigenpair set is algebraic.
    """
    if prob.k % 2 == 0:
        raise PreconditionError(f"k = {prob.k} is even; no witness is guaranteed")
    witnesses = []
    if prob.k == 1:
        n1 = float(prob.N(np.ones(1))[0])
        l00 = float(prob.L[0, 0])
        for s in s_samples:
            witnesses.append((float(s), l00 + float(s) * n1))
        return witnesses
    if prob.N.kind != "linear":
        raise UnsupportedMapError(
            "odd-dimension witness search needs a linear N for k >= 3"
        )
    Nmat = np.asarray(prob.N.payload, dtype=float)
    for s in s_samples:
        P = poly.char_poly(prob.L + float(s) * Nmat)
        for root in poly.real_roots(P):
            witnesses.append((float(s), root.value))
    return witnesses
