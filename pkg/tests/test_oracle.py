import numpy as np
import pytest

import certquad as cq
from conftest import integrand


class TestOracleIntegrate:
    def test_poly22_without_exact(self, unit):
        f = cq.Integrand(f=lambda x, y: x**2 * y**2)
        value, err = cq.oracle_integrate(f, unit)
        assert value == pytest.approx(1.0 / 9.0, abs=1e-12)
        assert err < 1e-12

    def test_constant(self):
        rect = cq.Rectangle(0, 2, 0, 3)
        value, _ = cq.oracle_integrate(cq.Integrand(f=lambda x, y: 1.0 + 0 * x), rect)
        assert value == pytest.approx(6.0, abs=1e-12)

    def test_sinsin(self):
        rect = cq.Rectangle(0.0, np.pi, 0.0, np.pi)
        value, _ = cq.oracle_integrate(cq.Integrand(f=lambda x, y: np.sin(x) * np.sin(y)), rect)
        assert value == pytest.approx(4.0, abs=1e-10)

    def test_exact_integral_overrides(self, unit):
        f = cq.Integrand(f=lambda x, y: x * y, exact_integral=0.25)
        assert cq.oracle_integrate(f, unit) == (0.25, 0.0)

    def test_tolerance_validated(self, unit):
        with pytest.raises(ValueError):
            cq.oracle_integrate(cq.Integrand(f=lambda x, y: x), unit, target_tol=1e-14)

    def test_self_consistency(self, unit):
        f = cq.Integrand(f=lambda x, y: np.exp(x) * np.cos(4 * y))
        v1, e1 = cq.oracle_integrate(f, unit, 1e-9)
        v2, _ = cq.oracle_integrate(f, unit, 1e-13)
        assert abs(v2 - v1) <= max(e1, 1e-13)

    def test_budget_exhaustion_carries_best_value(self, unit, monkeypatch):
        import certquad.oracle as oracle_mod

        monkeypatch.setattr(oracle_mod, "MAX_PANELS_PER_AXIS", 8)
        jump = cq.Integrand(f=lambda x, y: np.where(x + y > 0.7, 1.0, 0.0))
        with pytest.raises(cq.QuadratureConvergenceError) as err:
            cq.oracle_integrate(jump, unit, 1e-12)
        assert err.value.best_value == pytest.approx(0.755, abs=0.05)


SMOOTH = ("xy", "poly22", "cubes", "sinsin", "expsum", "sinsum")


class TestPartsIdentity:
    def test_poly22_trapezoid(self, unit):
        res = cq.parts_identity_residual(integrand("poly22", unit), cq.TrapezoidPhi(unit), unit)
        assert res <= 1e-8

    def test_zero_function(self, unit):
        zero = cq.Integrand(
            f=lambda x, y: 0.0 * x, fx=lambda x, y: 0.0 * x,
            fy=lambda x, y: 0.0 * x, fxy=lambda x, y: 0.0 * x,
            exact_integral=0.0,
        )
        assert cq.parts_identity_residual(zero, cq.MidpointPhi(unit), unit) == 0.0

    def test_expsum_midpoint_seams(self, unit):
        res = cq.parts_identity_residual(integrand("expsum", unit), cq.MidpointPhi(unit), unit)
        assert res <= 1e-8

    @pytest.mark.parametrize("name", SMOOTH)
    @pytest.mark.parametrize("rect_id", [0, 1])
    def test_residual_matrix(self, name, rect_id, unit):
        rect = unit if rect_id == 0 else cq.Rectangle(-1.0, 2.0, 0.5, 2.5)
        f = integrand(name, rect)
        lhs, _ = cq.oracle_integrate(f, rect)
        part = cq.PartitionSpec(rect, 2, 2)
        for w in (
            cq.TrapezoidPhi(rect),
            cq.MidpointPhi(rect),
            cq.CompositeTrapezoidPhi(rect, part),
        ):
            res = cq.parts_identity_residual(f, w, rect)
            assert res <= 1e-8 * (1.0 + abs(lhs)), (name, w.variant, res)

    def test_custom_phi_admissible(self, unit):
        w = cq.CustomPhi(lambda x: np.sin(x), lambda y: y**3, unit)
        f = integrand("sinsin", unit)
        lhs, _ = cq.oracle_integrate(f, unit)
        assert cq.parts_identity_residual(f, w, unit, resolution=128) <= 1e-8 * (1 + abs(lhs))

    def test_missing_partials_rejected(self, unit):
        bare = cq.Integrand(f=lambda x, y: x * y)
        with pytest.raises(cq.ConfigurationError):
            cq.parts_identity_residual(bare, cq.TrapezoidPhi(unit), unit)

    def test_sides_exposed(self, unit):
        lhs, rhs = cq.parts_identity_sides(integrand("xy", unit), cq.TrapezoidPhi(unit), unit)
        assert lhs == pytest.approx(0.25)
        assert rhs == pytest.approx(0.25)
