import numpy as np
import pytest

from specdeg import _kernels, examples, perturbed as pt

pure = _kernels.get_backend("pure")
compiled = (_kernels.get_backend("compiled")
            if "compiled" in _kernels.available() else None)

needs_compiled = pytest.mark.skipif(compiled is None,
                                    reason="compiled backend not built")


def random_map_arrays(rng, k):
    n_terms = int(rng.integers(1, 3 * k + 1))
    coefs = rng.normal(size=n_terms)
    exps = rng.integers(0, 3, size=(n_terms, k))
    cuts = np.sort(rng.integers(0, n_terms + 1, size=k - 1)) if k > 1 else []
    offsets = np.concatenate(([0], cuts, [n_terms])).astype(np.int64)
    return coefs, exps.astype(np.int64), offsets


@needs_compiled
class TestParity:
    def test_poly_eval(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            coeffs = rng.normal(size=int(rng.integers(1, 9)))
            x = float(rng.normal())
            assert pure.poly_eval(coeffs, x) == pytest.approx(
                compiled.poly_eval(coeffs, x), rel=1e-13, abs=1e-13)

    def test_nonlinear_eval_and_jacobian(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            k = int(rng.integers(1, 5))
            coefs, exps, offsets = random_map_arrays(rng, k)
            v = rng.normal(size=k)
            assert np.allclose(pure.nl_eval(coefs, exps, offsets, v),
                               compiled.nl_eval(coefs, exps, offsets, v),
                               atol=1e-12)
            assert np.allclose(pure.nl_jac(coefs, exps, offsets, v),
                               compiled.nl_jac(coefs, exps, offsets, v),
                               atol=1e-12)

    def test_phi_eval_and_jacobian(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            k = int(rng.integers(1, 5))
            L = rng.normal(size=(k, k))
            coefs, exps, offsets = random_map_arrays(rng, k)
            s, lam = rng.normal(size=2)
            v = rng.normal(size=k)
            assert np.allclose(
                pure.phi_eval(L, s, lam, v, coefs, exps, offsets),
                compiled.phi_eval(L, s, lam, v, coefs, exps, offsets),
                atol=1e-12)
            assert np.allclose(
                pure.phi_jac(L, s, lam, v, coefs, exps, offsets),
                compiled.phi_jac(L, s, lam, v, coefs, exps, offsets),
                atol=1e-12)

    def test_newton_correct(self):
        # both backends must converge to the same corrected point
        prob, (curve,) = examples.example(1)
        coefs = prob.N._coefs
        exps = prob.N._exps
        offsets = prob.N._offsets
        rng = np.random.default_rng(4)
        for _ in range(25):
            t = rng.uniform(0.0, 4.0 * np.pi)
            x_exact = curve.eval(t)
            x0 = x_exact + 1e-3 * rng.normal(size=x_exact.shape[0])
            # constrain along the curve tangent so the corrector problem
            # is well-posed everywhere on the loop
            cnormal = (curve.eval(t + 1e-4) - curve.eval(t - 1e-4))
            cnormal /= np.linalg.norm(cnormal)
            results = []
            for backend in (pure, compiled):
                x, ok, _, resid = backend.newton_correct(
                    prob.L, coefs, exps, offsets, x0.copy(), cnormal,
                    float(cnormal @ x0), 1e-12, 50)
                assert ok
                assert resid < 1e-10
                results.append(x)
            assert np.allclose(results[0], results[1], atol=1e-10)


class TestSelection:
    def test_available_and_current(self):
        names = _kernels.available()
        assert "pure" in names
        assert _kernels.current() in names

    def test_select_round_trip(self):
        before = _kernels.current()
        try:
            _kernels.select("pure")
            assert _kernels.current() == "pure"
            if compiled is not None:
                _kernels.select("compiled")
                assert _kernels.current() == "compiled"
        finally:
            _kernels.select(before)

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            _kernels.select("cuda")
        with pytest.raises(ValueError):
            _kernels.get_backend("cuda")

    @needs_compiled
    def test_trace_identical_across_backends(self):
        prob, _ = examples.example(1)
        before = _kernels.current()
        traces = {}
        try:
            for name in ("pure", "compiled"):
                _kernels.select(name)
                (b,) = pt.trace_component(prob, 1.0, np.array([1.0, 0.0]))
                traces[name] = b
        finally:
            _kernels.select(before)
        bp, bc = traces["pure"], traces["compiled"]
        assert type(bp.classification) is type(bc.classification)
        assert len(bp.trivial_solutions_met) == len(bc.trivial_solutions_met)
        n = min(len(bp.points), len(bc.points))
        for p, q in zip(bp.points[:n], bc.points[:n]):
            assert p.s == pytest.approx(q.s, abs=1e-8)
            assert p.lam == pytest.approx(q.lam, abs=1e-8)
