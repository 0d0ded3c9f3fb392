"""Real univariate polynomials: characteristic polynomial extraction,
real root isolation with multiplicities, and sign-jump computation.

The sign-jump of a polynomial P at a real root r is
``sign P(r+eps) - sign P(r-eps)`` for small eps; it is 0 exactly when
the root has even multiplicity and +-2 otherwise.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateInputError, DimensionError, NotARootError, SpecdegError

DEFAULT_ROOT_TOL = 1e-10
DEFAULT_MULT_TOL = 1e-8
STURM_DROP_TOL = 1e-13


class Poly:
    """Real polynomial by ascending coefficient list.

    Construction trims coefficients that are exactly zero at the top
    end (never tolerance-trims); evaluation is Horner-form and
    deterministic.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [float(c) for c in coeffs]
        if not cs:
            cs = [0.0]
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        self.coeffs = tuple(cs)

    def __call__(self, x):
        return _kernels.poly_eval(np.asarray(self.coeffs), float(x))

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def is_zero(self):
        return self.coeffs == (0.0,)

    def degree(self):
        """Largest index with a nonzero coefficient (0 for the zero poly)."""
        return len(self.coeffs) - 1

    def derivative(self):
        if len(self.coeffs) == 1:
            return Poly([0.0])
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def max_abs_coeff(self):
        return max(abs(c) for c in self.coeffs)

    def eval_scale(self, x):
        """Magnitude scale of evaluating self near x (for root tolerances)."""
        return self.max_abs_coeff() * max(1.0, abs(float(x))) ** self.degree()


@dataclass(frozen=True)
class RealRoot:
    """A real root with algebraic multiplicity and an isolating interval."""

    value: float
    multiplicity: int
    isolating_interval: tuple


def char_poly(L):
    """Characteristic polynomial P(lam) = det(L - lam I).

    Uses the Faddeev-LeVerrier recurrence, so integer matrices of desk
    size yield exactly representable coefficients. The leading
    coefficient is (-1)**k exactly.
    """
    A = np.asarray(L, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionError(f"char_poly needs a square matrix, got shape {A.shape}")
    k = A.shape[0]
    eye = np.eye(k)
    # det(lam I - A) = lam^k + a_1 lam^(k-1) + ... + a_k
    desc = [1.0]
    M = A.copy()
    for j in range(1, k + 1):
        a_j = -np.trace(M) / j
        desc.append(float(a_j))
        if j < k:
            M = A @ (M + a_j * eye)
    sign = 1.0 if k % 2 == 0 else -1.0
    return Poly([sign * c for c in reversed(desc)])


def _poly_rem(num, den):
    """Remainder of float polynomial division (ascending coeff lists)."""
    num = list(num)
    dd = len(den) - 1
    lead = den[-1]
    for i in range(len(num) - 1, dd - 1, -1):
        q = num[i] / lead
        if q != 0.0:
            for j in range(dd + 1):
                num[i - dd + j] -= q * den[j]
        num[i] = 0.0
    rem = num[:dd] if dd > 0 else []
    return rem


def _normalize(coeffs):
    m = max(abs(c) for c in coeffs)
    return [c / m for c in coeffs] if m > 0 else coeffs


def _sturm_chain(P):
    """Euclidean remainder chain of (P, P'), normalized, small terms dropped.

    With multiple roots the chain terminates at (a multiple of) the gcd;
    sign-variation counts still count distinct real roots.
    """
    chain = [_normalize(list(P.coeffs))]
    dp = P.derivative()
    if dp.is_zero():
        return chain
    chain.append(_normalize(list(dp.coeffs)))
    while len(chain[-1]) > 1:
        rem = _poly_rem(chain[-2], chain[-1])
        rem = [-c for c in rem]
        m = max((abs(c) for c in rem), default=0.0)
        # With a multiple root the exact remainder vanishes at the gcd
        # stage; in floats it shows up as uniformly tiny (inputs are
        # normalized to max-coefficient 1). Keeping it would corrupt
        # the tail of the chain.
        if m <= 1e-9:
            break
        rem = [c if abs(c) > STURM_DROP_TOL * max(1.0, m) else 0.0 for c in rem]
        while rem and rem[-1] == 0.0:
            rem.pop()
        if not rem:
            break
        chain.append(_normalize(rem))
    return chain


def _variations(chain, x):
    signs = []
    for cs in chain:
        val = _kernels.poly_eval(np.asarray(cs), x)
        if val != 0.0:
            signs.append(1.0 if val > 0 else -1.0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_distinct_roots(chain, a, b):
    """Number of distinct real roots in (a, b]."""
    return _variations(chain, a) - _variations(chain, b)


def _split_point(P, a, b):
    """Midpoint of (a, b) nudged so that it is not itself a root of P.

    Returns None when every candidate evaluates to exactly zero (the
    interval is below the evaluation noise floor of a multiple root).
    """
    mid = 0.5 * (a + b)
    width = b - a
    shift = 0
    while P(mid) == 0.0 and shift < 50:
        mid += width * 17e-4
        shift += 1
    if shift >= 50 or not (a < mid < b):
        return None
    return mid


def _isolate(P, chain, a, b, count, out):
    if count == 0:
        return
    if count == 1:
        out.append((a, b))
        return
    mid = _split_point(P, a, b)
    if mid is None or b - a <= 4e-15 * max(1.0, abs(a), abs(b)):
        # Unresolvable cluster: the chain's variation count is noise at
        # this width, so the cluster is reported as a single root.
        out.append((a, b))
        return
    left = _count_distinct_roots(chain, a, mid)
    _isolate(P, chain, a, mid, left, out)
    _isolate(P, chain, mid, b, count - left, out)


def _refine(P, chain, a, b, tol):
    """Shrink (a, b], known to hold one distinct root, to width < tol."""
    while b - a >= tol:
        mid = _split_point(P, a, b)
        if mid is None:
            # The bracket sits below the evaluation noise floor of a
            # multiple root; the Newton polish recovers the accuracy.
            break
        if _count_distinct_roots(chain, a, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


def _derivatives_at(P, x, max_order):
    vals = []
    q = P
    for _ in range(max_order):
        q = q.derivative()
        vals.append(q(x))
    return vals


def _multiplicity(P, x, mult_tol):
    scale = P.eval_scale(x)
    q = P
    for m in range(1, P.degree() + 1):
        q = q.derivative()
        if abs(q(x)) > mult_tol * scale:
            return m
    return P.degree()


def _estimate_mult_newton(P, value, a, b):
    """Multiplicity estimate from the Newton contraction ratio.

    At an m-fold root the Newton step on P shrinks the error by the
    factor 1 - 1/m, so two steps started a safe distance away (where
    |P| is far above evaluation noise) reveal m without touching the
    derivative noise floor. Returns None when inconclusive.
    """
    dp = P.derivative()
    room_hi, room_lo = b - value, value - a
    direction = 1.0 if room_hi >= room_lo else -1.0
    room = max(room_hi, room_lo)
    d_cap = min(0.2 * room, 0.05 * max(1.0, abs(value)))
    d = max(1e-8, 1e-8 * abs(value))
    while d < d_cap:
        x0 = value + direction * d
        if abs(P(x0)) > 1e-11 * P.eval_scale(x0):
            break
        d *= 4.0
    else:
        return None
    # A large probe distance means the ratio is contaminated by the
    # other roots; the derivative test takes over in that regime.
    if d > 0.02 * max(1.0, abs(value)):
        return None
    xs = [value + direction * d]
    for _ in range(2):
        fx, dfx = P(xs[-1]), dp(xs[-1])
        if dfx == 0.0:
            return None
        xs.append(xs[-1] - fx / dfx)
    s1, s2 = xs[1] - xs[0], xs[2] - xs[1]
    if s1 == 0.0:
        return None
    ratio = s2 / s1
    # Slightly negative ratios are Newton overshoot at a simple root.
    if not -0.4 <= ratio < 0.95:
        return None
    m_raw = 1.0 / (1.0 - ratio)
    m = round(m_raw)
    if not 1 <= m <= P.degree() or abs(m_raw - m) > 0.3:
        return None
    return m


def _polish(P, x, mult, lo, hi):
    """Newton on P^(m-1), which has a simple root at x."""
    q = P
    for _ in range(mult - 1):
        q = q.derivative()
    dq = q.derivative()
    for _ in range(60):
        d = dq(x)
        if d == 0.0:
            break
        step = q(x) / d
        xn = x - step
        if not (lo < xn < hi):
            break
        x = xn
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


def _widen_endpoint(P, value, direction, d0, d_max):
    """Move away from the root until |P| clears the evaluation noise floor."""
    d = d0
    while d < d_max:
        x = value + direction * d
        if abs(P(x)) > 1e-12 * P.eval_scale(x):
            return d
        d *= 4.0
    return d_max


def real_roots(P, tol=DEFAULT_ROOT_TOL, mult_tol=DEFAULT_MULT_TOL):
    """All real roots of P with multiplicities and isolating intervals.

    Isolation uses Sturm sign-variation counts on a Cauchy-bound
    bracket, bisection refinement to width < tol, and a
    derivative-vanishing test for the algebraic multiplicity.
    """
    if not isinstance(P, Poly):
        P = Poly(P)
    if P.is_zero():
        raise DegenerateInputError("zero polynomial has no isolated roots")
    if P.degree() == 0:
        return []
    n = P.degree()
    lead = abs(P.coeffs[-1])
    cauchy = 1.0 + max(abs(c) for c in P.coeffs[:-1]) / lead
    lo, hi = -cauchy - 1.0, cauchy + 1.0
    chain = _sturm_chain(P)
    total = _count_distinct_roots(chain, lo, hi)
    intervals = []
    _isolate(P, chain, lo, hi, total, intervals)

    raw = []
    for a, b in intervals:
        ra, rb = _refine(P, chain, a, b, tol)
        value = 0.5 * (ra + rb)
        # Near a multiple root the Sturm refinement is noise-limited, so
        # the multiplicity test and the Newton polish are alternated
        # until they agree.
        mult = _estimate_mult_newton(P, value, a, b) or _multiplicity(
            P, value, mult_tol
        )
        # The polish stays inside a window around the refined value so
        # it cannot jump to a different root of P^(m-1); a candidate is
        # accepted only if |P| there is near the evaluation noise floor.
        w = 1e-3 * max(1.0, abs(value))
        p_lo, p_hi = max(a, value - w), min(b, value + w)
        for _ in range(8):
            candidate = _polish(P, value, mult, p_lo, p_hi)
            moved = False
            if abs(P(candidate)) <= 1e-12 * P.eval_scale(candidate):
                moved = abs(candidate - value) > 1e-13 * max(1.0, abs(value))
                value = candidate
            mult_new = _estimate_mult_newton(P, value, a, b) or _multiplicity(
                P, value, mult_tol
            )
            if mult_new == mult and not moved:
                break
            mult = mult_new
        raw.append((value, mult, a, b))
    raw.sort(key=lambda r: r[0])

    # Near a multiple root the variation count can phantom-split one
    # root into near-identical copies; polished values that coincide
    # within 1e-7 are one root.
    merged = []
    for value, mult, a, b in raw:
        if merged and value - merged[-1][0] <= 1e-7 * max(1.0, abs(value)):
            pv, pm, pa, pb = merged[-1]
            merged[-1] = (pv, max(pm, mult), min(pa, a), max(pb, b))
        else:
            merged.append((value, mult, a, b))
    raw = merged

    roots = []
    for i, (value, mult, a, b) in enumerate(raw):
        gap_lo = (value - raw[i - 1][0]) / 2 if i > 0 else value - lo
        gap_hi = (raw[i + 1][0] - value) / 2 if i + 1 < len(raw) else hi - value
        d_lo = _widen_endpoint(P, value, -1.0, max(tol, 1e-13), 0.98 * gap_lo)
        d_hi = _widen_endpoint(P, value, +1.0, max(tol, 1e-13), 0.98 * gap_hi)
        roots.append(RealRoot(value, mult, (value - d_lo, value + d_hi)))
    return roots


def sign_jump(P, lambda_star, root):
    """Sign-jump of P at lambda_star, in {2, -2, 0}.

    Evaluated at the endpoints of the root's isolating interval; the
    parity cross-check (zero iff even multiplicity) is asserted.
    """
    if not isinstance(P, Poly):
        P = Poly(P)
    lam = float(lambda_star)
    if abs(P(lam)) > 1e-8 * P.eval_scale(lam):
        raise NotARootError(f"{lam!r} is not a root of {P!r} within tolerance")
    a, b = root.isolating_interval
    if not (a < lam < b):
        raise NotARootError(
            f"{lam!r} is outside the isolating interval ({a!r}, {b!r})"
        )
    jump = int(np.sign(P(b)) - np.sign(P(a)))
    if (jump == 0) != (root.multiplicity % 2 == 0):
        raise SpecdegError(
            f"sign-jump {jump} inconsistent with multiplicity {root.multiplicity}"
        )
    return jump
