import numpy as np
import pytest

from specdeg import examples, perturbed as pt
from specdeg.errors import ProblemFileError


class TestExampleData:
    def test_ids(self):
        for eid in range(1, 7):
            prob, curves = examples.example(eid)
            assert prob.k in (1, 2, 3)
            assert curves
        with pytest.raises(ProblemFileError):
            examples.example(9)

    def test_first_example_operators(self):
        prob, (curve,) = examples.example(1)
        assert np.allclose(prob.L, [[1.0, 0.0], [0.0, -1.0]])
        assert np.allclose(prob.N.payload, [[0.0, -1.0], [1.0, 0.0]])
        assert curve.param_range == (0.0, 4.0 * np.pi)
        assert curve.closed

    def test_residual_invariant(self):
        for eid in range(1, 7):
            prob, curves = examples.example(eid)
            for c in curves:
                assert examples.curve_residual(prob, c, n=1000) <= 1e-12

    def test_curve_points_on_sphere(self):
        for eid in range(1, 7):
            prob, curves = examples.example(eid)
            for c in curves:
                a, b = c.param_range
                for t in np.linspace(a, b, 50):
                    v = c.eval(t)[2:]
                    assert abs(np.linalg.norm(v) - 1.0) < 1e-12

    def test_loop_curve_defining_relation(self):
        # third component of the three-dimensional loop: 2 v3 + s v1 = lam v3
        prob, (sigma,) = examples.example(5)
        a, b = sigma.param_range
        for t in np.linspace(a, b, 200):
            x = sigma.eval(t)
            s, lam, v = x[0], x[1], x[2:]
            assert abs(2.0 * v[2] + s * v[0] - lam * v[2]) < 1e-12

    def test_expected_classifications_recorded(self):
        _, curves = examples.example(2)
        for c in curves:
            assert c.expected_classification is pt.UnboundedExceededBound
            assert len(c.expected_trivials) == 1


class TestVerifyExample:
    def test_closed_loop_example(self):
        report = examples.verify_example(1)
        assert report.passed
        for c in report.checks:
            assert isinstance(c.classification, pt.ClosedLoop)
            assert c.max_distance < 1e-5
            assert len(c.trivials) == 4

    def test_singular_intersections_reported_as_stall(self):
        report = examples.verify_example(3)
        assert report.passed
        stalls = [c for c in report.checks
                  if isinstance(c.classification, pt.Stalled)]
        assert len(stalls) == 2

    def test_branch_distance_detects_outliers(self):
        prob, curves = examples.example(1)
        off = pt.SolutionTriple(0.5, 0.5, np.array([1.0, 0.0]))
        fake = pt.Branch((off,), pt.ClosedLoop(), (), off)
        assert examples.branch_distance(fake, curves) > 0.1
