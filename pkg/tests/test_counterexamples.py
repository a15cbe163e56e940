import numpy as np
import pytest

from divlab.counterexamples import (
    counterexample_psi,
    counterexample_upsilon,
    reevaluate_psi_witness,
    reevaluate_upsilon_witness,
)


class TestUpsilonWitnesses:
    @pytest.mark.parametrize("p,s", [(2.5, 0.4), (-1.5, 1.0), (3.0, 1.0 / 3.0)])
    def test_certified_concavity_violations(self, p, s):
        report = counterexample_upsilon(p, s, "concave")
        assert report.found
        assert report.certified
        assert report.margin > 1e-6
        replay = reevaluate_upsilon_witness(report.witness)
        assert abs(replay - report.margin) <= 1e-12 * max(1.0, abs(report.margin))

    def test_negative_control_convex_region(self):
        report = counterexample_upsilon(1.5, 1.0, "convex")
        assert not report.found
        assert report.witness is None

    def test_negative_control_concave_region(self):
        report = counterexample_upsilon(0.5, 2.0, "concave")
        assert not report.found

    def test_invalid_direction(self):
        with pytest.raises(ValueError):
            counterexample_upsilon(2.5, 0.4, "sideways")


class TestPsiWitness:
    def test_mixed_sign_convexity_violation(self):
        report = counterexample_psi(1.2, 0.5, 1.0, "convex")
        assert report.found and report.certified
        assert report.margin > 1e-6
        replay = reevaluate_psi_witness(report.witness)
        assert abs(replay - report.margin) <= 1e-12 * max(1.0, abs(report.margin))

    def test_negative_control_in_concave_square(self):
        report = counterexample_psi(0.5, 0.4, 1.0, "concave")
        assert not report.found


class TestScalarSanity:
    def test_cube_is_convex_in_each_slot_but_not_jointly_concave(self):
        # p = 3, s = 1: the a-direction second derivative of a^3 + b^3 is
        # positive, so joint concavity fails by the Hessian sign alone
        def f(a, b):
            return a**3 + b**3

        a, b, h = 0.7, 1.3, 1e-4
        second_a = (f(a - h, b) - 2 * f(a, b) + f(a + h, b)) / h**2
        assert second_a > 0.0
        assert abs(second_a - 6 * a) < 1e-4

    def test_eps_family_reduces_to_scalar_sum(self):
        # Tr (K* A^p K)^s at K = [[1,0],[1,eps]] approaches (a^p + b^p)^s
        from divlab.divergences import upsilon

        p, s = 2.5, 0.4
        a, b = 0.7, 1.9
        target = (a**p + b**p) ** s
        values = []
        for eps in (1e-2, 1e-3, 1e-4):
            k = np.array([[1.0, 0.0], [1.0, eps]], dtype=complex)
            values.append(upsilon(np.diag([a, b]).astype(complex), k, p, s))
        errors = [abs(v - target) for v in values]
        assert errors[0] > errors[1] > errors[2]
        # the stray eigenvalue scales like eps^2, entering the trace as eps^(2s)
        assert errors[2] < 1e-3
