"""Built-in problems with closed-form reference solution curves.

Each example provides the operator pair (L, N), the solution curves of
the perturbed problem in closed form, and the start points from which
the continuation engine is expected to recover them. ``verify_example``
traces from every start and checks branch-to-reference distance,
classification, and the trivial solutions met.
"""

from dataclasses import dataclass

import numpy as np

from . import perturbed as pt
from .errors import ProblemFileError

BOUND = 10.0


@dataclass(frozen=True)
class ReferenceCurve:
    """Closed-form solution curve t -> (s, lambda, v).

    ``expected_classification`` is the classification a trace along this
    curve should report, and ``expected_trivials`` the eigenvalues of the
    trivial solutions it passes through (None when the curve is not a
    traced target, e.g. a set of trivial solutions itself).
    """

    name: str
    param_range: tuple
    eval: object  # callable t -> ndarray of shape (2 + k,)
    closed: bool = False
    expected_classification: type = None
    expected_trivials: tuple = None


@dataclass(frozen=True)
class StartSpec:
    """A trivial start plus what the trace from it must produce."""

    lam: float
    v: tuple
    allowed_classifications: tuple  # of classification types
    exact_trivial_count: int = None
    trivial_lams: tuple = None  # exact multiset of trivial eigenvalues


@dataclass(frozen=True)
class BranchCheck:
    start: tuple
    classification: object
    max_distance: float
    trivials: tuple
    ok: bool
    note: str


@dataclass(frozen=True)
class ExampleReport:
    example_id: int
    passed: bool
    checks: tuple


def _curve(name, rng, fn, closed=False, cls=None, trivials=None):
    return ReferenceCurve(name, rng, fn, closed, cls, trivials)


def _ex1():
    prob = pt.Problem(2, [[1.0, 0.0], [0.0, -1.0]],
                      pt.NonlinearMap.linear([[0.0, -1.0], [1.0, 0.0]]),
                      "rotation-coupled indefinite pair")

    def gamma(t):
        return np.array([np.sin(t), np.cos(t), np.cos(t / 2), np.sin(t / 2)])

    curves = [_curve("gamma", (0.0, 4.0 * np.pi), gamma, closed=True,
                     cls=pt.ClosedLoop, trivials=(1.0, 1.0, -1.0, -1.0))]
    starts = [
        StartSpec(1.0, (1.0, 0.0), (pt.ClosedLoop,), 4, (1.0, 1.0, -1.0, -1.0)),
        StartSpec(1.0, (-1.0, 0.0), (pt.ClosedLoop,), 4, (1.0, 1.0, -1.0, -1.0)),
        StartSpec(-1.0, (0.0, 1.0), (pt.ClosedLoop,), 4, (1.0, 1.0, -1.0, -1.0)),
        StartSpec(-1.0, (0.0, -1.0), (pt.ClosedLoop,), 4, (1.0, 1.0, -1.0, -1.0)),
    ]
    return prob, curves, starts


def _ex2():
    prob = pt.Problem(2, [[1.0, 0.0], [0.0, -1.0]],
                      pt.NonlinearMap.linear([[0.0, 1.0], [1.0, 0.0]]),
                      "symmetric-coupled indefinite pair")
    tmax = float(np.arcsinh(BOUND)) + 0.2

    def branch(sign_lam, sign_v):
        def f(t):
            s = np.sinh(t)
            c = np.cosh(t)
            if sign_lam > 0:
                w = np.array([1.0 + c, s])
            else:
                w = np.array([-s, 1.0 + c])
            w = sign_v * w / np.linalg.norm(w)
            return np.concatenate(([s, sign_lam * c], w))
        return f

    curves = [
        _curve("hyperbola(+,+)", (-tmax, tmax), branch(+1, +1),
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("hyperbola(+,-)", (-tmax, tmax), branch(+1, -1),
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("hyperbola(-,+)", (-tmax, tmax), branch(-1, +1),
               cls=pt.UnboundedExceededBound, trivials=(-1.0,)),
        _curve("hyperbola(-,-)", (-tmax, tmax), branch(-1, -1),
               cls=pt.UnboundedExceededBound, trivials=(-1.0,)),
    ]
    starts = [
        StartSpec(1.0, (1.0, 0.0), (pt.UnboundedExceededBound,), 1, (1.0,)),
        StartSpec(1.0, (-1.0, 0.0), (pt.UnboundedExceededBound,), 1, (1.0,)),
        StartSpec(-1.0, (0.0, 1.0), (pt.UnboundedExceededBound,), 1, (-1.0,)),
        StartSpec(-1.0, (0.0, -1.0), (pt.UnboundedExceededBound,), 1, (-1.0,)),
    ]
    return prob, curves, starts


def _ex3():
    prob = pt.Problem(2, [[1.0, 0.0], [0.0, 2.0]],
                      pt.NonlinearMap.constant([1.0, 0.0]),
                      "constant forcing on a diagonal pair")
    B = BOUND + 1.0

    def line1(t):
        return np.array([t, 1.0 - t, -1.0, 0.0])

    def line2(t):
        return np.array([t, 1.0 + t, 1.0, 0.0])

    def circle(t):
        return np.array([np.sin(t), 2.0, np.sin(t), np.cos(t)])

    curves = [
        _curve("line1", (-B, B), line1,
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("line2", (-B, B), line2,
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("circle", (0.0, 2.0 * np.pi), circle, closed=True,
               cls=pt.Stalled, trivials=(2.0, 2.0)),
    ]
    # the circle meets the lines at two genuinely singular points of the
    # solution set, so traces along it stall there by design
    starts = [
        StartSpec(1.0, (1.0, 0.0), (pt.UnboundedExceededBound,)),
        StartSpec(1.0, (-1.0, 0.0), (pt.UnboundedExceededBound,)),
        StartSpec(2.0, (0.0, 1.0), (pt.Stalled,)),
        StartSpec(2.0, (0.0, -1.0), (pt.Stalled,)),
    ]
    return prob, curves, starts


def _ex4():
    # concrete instance of the one-dimensional problem: N(1)=1, N(-1)=2,
    # realized by the polynomial N(x) = 1.5 - 0.5 x
    prob = pt.Problem(1, [[1.0]],
                      pt.NonlinearMap.polynomial([[(1.5, (0,)), (-0.5, (1,))]]),
                      "one-dimensional two-line problem")
    B = BOUND + 1.0

    def line_pos(t):
        return np.array([t, 1.0 + t, 1.0])

    def line_neg(t):
        return np.array([t, 1.0 - 2.0 * t, -1.0])

    curves = [
        _curve("line v=+1", (-B, B), line_pos,
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("line v=-1", (-B, B), line_neg,
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
    ]
    starts = [
        StartSpec(1.0, (1.0,), (pt.UnboundedExceededBound,), 1, (1.0,)),
        StartSpec(1.0, (-1.0,), (pt.UnboundedExceededBound,), 1, (1.0,)),
    ]
    return prob, curves, starts


def _ex5():
    prob = pt.Problem(3, [[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 2.0]],
                      pt.NonlinearMap.linear([[0.0, 1.0, 0.0],
                                              [-1.0, 0.0, 0.0],
                                              [1.0, 0.0, 0.0]]),
                      "even-multiplicity loop problem")

    def sigma(t):
        half = t / 2.0
        w = np.array([np.sin(half), np.cos(half),
                      (1.0 - np.cos(t)) * np.sin(half) / (np.sin(t) - 2.0)])
        w /= np.linalg.norm(w)
        return np.concatenate(([1.0 - np.cos(t), np.sin(t)], w))

    curves = [_curve("sigma", (0.0, 4.0 * np.pi), sigma, closed=True,
                     cls=pt.ClosedLoop, trivials=(0.0, 0.0))]
    starts = [
        StartSpec(0.0, (0.0, 1.0, 0.0), (pt.ClosedLoop,), 2, (0.0, 0.0)),
        StartSpec(0.0, (0.0, -1.0, 0.0), (pt.ClosedLoop,), 2, (0.0, 0.0)),
    ]
    return prob, curves, starts


def _ex6():
    prob = pt.Problem(3, [[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
                      pt.NonlinearMap.linear([[1.0, 0.0, 0.0],
                                              [0.0, 0.0, -1.0],
                                              [0.0, 1.0, 0.0]]),
                      "multiplicity-three line problem")
    B = BOUND + 1.0

    def line(sign):
        def f(t):
            return np.array([t, 1.0 + t, sign * 1.0, 0.0, 0.0])
        return f

    def trivial_circle(t):
        return np.array([0.0, 1.0, np.cos(t), np.sin(t), 0.0])

    curves = [
        _curve("line v=+e1", (-B, B), line(+1.0),
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("line v=-e1", (-B, B), line(-1.0),
               cls=pt.UnboundedExceededBound, trivials=(1.0,)),
        _curve("trivial circle", (0.0, 2.0 * np.pi), trivial_circle, closed=True),
    ]
    starts = [
        StartSpec(1.0, (1.0, 0.0, 0.0), (pt.UnboundedExceededBound,), 1, (1.0,)),
        StartSpec(1.0, (-1.0, 0.0, 0.0), (pt.UnboundedExceededBound,), 1, (1.0,)),
    ]
    return prob, curves, starts


_BUILDERS = {1: _ex1, 2: _ex2, 3: _ex3, 4: _ex4, 5: _ex5, 6: _ex6}


def example(example_id):
    """The built-in problem and its reference curves, by id (1..6)."""
    if example_id not in _BUILDERS:
        raise ProblemFileError(f"no built-in example {example_id!r} (use 1..6)")
    prob, curves, _ = _BUILDERS[example_id]()
    return prob, curves


def example_starts(example_id):
    """The start specifications used by verify_example."""
    if example_id not in _BUILDERS:
        raise ProblemFileError(f"no built-in example {example_id!r} (use 1..6)")
    _, _, starts = _BUILDERS[example_id]()
    return starts


def curve_residual(prob, curve, n=1000):
    """Max of ||Phi(curve(t))|| over n uniformly sampled parameters."""
    a, b = curve.param_range
    worst = 0.0
    for t in np.linspace(a, b, n):
        x = curve.eval(t)
        worst = max(worst, float(np.linalg.norm(
            pt.phi(prob, x[0], x[1], x[2:]))))
    return worst


def _curve_samples(curve, n=1024):
    a, b = curve.param_range
    ts = np.linspace(a, b, n)
    return ts, np.array([curve.eval(t) for t in ts])


def _product_metric(dx):
    return max(abs(dx[0]), abs(dx[1]), float(np.linalg.norm(dx[2:])))


def _distance_to_curve(x, curve, ts, i):
    """Product-metric distance from x to the curve near sample index i.

    The squared distance along the parameter is locally quadratic, so a
    few parabolic-fit rounds locate the nearest point quickly.
    """
    a, b = curve.param_range

    def f(t):
        return float(np.sum((curve.eval(t) - x) ** 2))

    t0 = ts[i]
    h = ts[1] - ts[0]
    for _ in range(3):
        f_lo, f_mid, f_hi = f(t0 - h), f(t0), f(t0 + h)
        denom = f_lo - 2.0 * f_mid + f_hi
        if denom > 0.0:
            shift = 0.5 * h * (f_lo - f_hi) / denom
            t0 += min(max(shift, -h), h)
        if not curve.closed:
            t0 = min(max(t0, a), b)
        h /= 16.0
    return _product_metric(curve.eval(t0) - x)


def branch_distance(branch, curves, cache=None):
    """Max over branch points of the distance to the nearest curve."""
    prepared = cache if cache is not None else [
        (c,) + _curve_samples(c) for c in curves
    ]
    if not branch.points:
        return 0.0
    pts = np.array([np.concatenate(([p.s, p.lam], p.v)) for p in branch.points])
    # coarse pass, vectorized: nearest sample per point on each curve
    best_d2 = np.full(len(pts), np.inf)
    best_curve = np.zeros(len(pts), dtype=int)
    best_idx = np.zeros(len(pts), dtype=int)
    for ci, (_, _, samples) in enumerate(prepared):
        d2 = np.sum((pts[:, None, :] - samples[None, :, :]) ** 2, axis=2)
        idx = np.argmin(d2, axis=1)
        dmin = d2[np.arange(len(pts)), idx]
        better = dmin < best_d2
        best_d2[better] = dmin[better]
        best_curve[better] = ci
        best_idx[better] = idx[better]
    # fine pass against the coarsely-nearest curve; near intersections the
    # coarse winner can be the wrong curve, so fall back to refining all
    worst = 0.0
    for x, ci, i in zip(pts, best_curve, best_idx):
        c, ts, _ = prepared[ci]
        d = _distance_to_curve(x, c, ts, int(i))
        if d > 1e-7 and len(prepared) > 1:
            d = min(
                _distance_to_curve(
                    x, c2, ts2,
                    int(np.argmin(np.sum((ss2 - x) ** 2, axis=1))),
                )
                for c2, ts2, ss2 in prepared
            )
        worst = max(worst, d)
    return worst


def _trivials_match(branch, spec):
    if spec.exact_trivial_count is not None and \
            len(branch.trivial_solutions_met) != spec.exact_trivial_count:
        return False, (f"expected {spec.exact_trivial_count} trivial solutions, "
                       f"met {len(branch.trivial_solutions_met)}")
    if spec.trivial_lams is not None:
        got = sorted(round(t.lam, 6) for t in branch.trivial_solutions_met)
        want = sorted(spec.trivial_lams)
        if len(got) != len(want) or any(abs(g - w) > 1e-6
                                        for g, w in zip(got, want)):
            return False, f"trivial eigenvalues {got} != expected {want}"
    return True, ""


def verify_example(example_id, opts=None, distance_tol=1e-5):
    """Trace every configured start and check it against the references."""
    prob, curves, starts = _BUILDERS[example_id]()
    cache = [(c,) + _curve_samples(c) for c in curves]
    checks = []
    passed = True
    for spec in starts:
        branches = pt.trace_component(prob, spec.lam, np.array(spec.v), opts)
        for b in branches:
            dist = branch_distance(b, curves, cache)
            ok = dist < distance_tol
            note = "" if ok else f"distance {dist:.2e} >= {distance_tol:g}"
            if not isinstance(b.classification, spec.allowed_classifications):
                ok = False
                note = (note + "; " if note else "") + \
                    f"classification {b.classification!r} not allowed"
            t_ok, t_note = _trivials_match(b, spec)
            if not t_ok:
                ok = False
                note = (note + "; " if note else "") + t_note
            checks.append(BranchCheck((spec.lam, spec.v), b.classification,
                                      dist, b.trivial_solutions_met, ok, note))
            passed = passed and ok
    return ExampleReport(example_id, passed, tuple(checks))
