import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import certquad as cq
from conftest import integrand

P_GRID = (1, 1.5, 2, 3, cq.INF)


def bundle(name, rect, p, family="trapezoid", part=None, resolution=128):
    return cq.derivative_norms(
        integrand(name, rect), rect, p, partition=part, rule_family=family,
        resolution=resolution,
    )


class TestEstimates:
    def test_trapezoid(self, unit):
        r23 = cq.Rectangle(0, 2, 0, 3)
        assert cq.trapezoid_estimate(integrand("one", r23), r23) == pytest.approx(6.0)
        assert cq.trapezoid_estimate(integrand("xy", unit), unit) == pytest.approx(0.25)
        assert cq.trapezoid_estimate(integrand("poly22", unit), unit) == pytest.approx(0.25)

    def test_midpoint(self, unit):
        r23 = cq.Rectangle(0, 2, 0, 3)
        assert cq.midpoint_estimate(integrand("one", r23), r23) == pytest.approx(6.0)
        assert cq.midpoint_estimate(integrand("poly22", unit), unit) == pytest.approx(1.0 / 16.0)
        assert cq.midpoint_estimate(integrand("xy", unit), unit) == pytest.approx(0.25)

    def test_composite_midpoint(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        f = integrand("poly22", unit)
        expect = 0.25 * sum(
            (a * b) ** 2 for a in (0.25, 0.75) for b in (0.25, 0.75))
        assert cq.composite_midpoint_estimate(f, unit, part) == pytest.approx(expect)

    def test_composite_trapezoid_exact_for_bilinear(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        assert cq.composite_trapezoid_estimate(integrand("xy", unit), unit, part) == (
            pytest.approx(0.25, abs=1e-15))

    def test_composite_constant_exactness(self, unit):
        # the cell-summed corner rule integrates constants exactly;
        # the telescoped boundary-only display does not (m=2, n=3 -> 2/3).
        part = cq.PartitionSpec(unit, 2, 3)
        one = integrand("one", unit)
        assert cq.composite_trapezoid_estimate(one, unit, part) == pytest.approx(1.0, abs=1e-15)
        displayed = cq.composite_trapezoid_estimate_boundary_only(one, unit, part)
        assert displayed == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_boundary_only_matches_at_single_cell(self, unit):
        part = cq.PartitionSpec(unit, 1, 1)
        f = integrand("expsum", unit)
        assert cq.composite_trapezoid_estimate_boundary_only(f, unit, part) == (
            pytest.approx(cq.trapezoid_estimate(f, unit)))

    def test_nonfinite_corner(self, unit):
        bad = cq.Integrand(f=lambda x, y: np.where(x > 0.5, np.inf, 1.0))
        with pytest.raises(cq.EvaluationError):
            cq.trapezoid_estimate(bad, unit)

    @given(
        st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
        st.floats(0.1, 4), st.floats(0.1, 4),
    )
    def test_linear_span_exactness_random(self, c0, c1, c2, c3, w, h):
        # estimates reproduce integrals of span{1, x, y, xy} exactly
        rect = cq.Rectangle(-1.0, -1.0 + w, 2.0, 2.0 + h)
        f = cq.Integrand(f=lambda x, y: c0 + c1 * x + c2 * y + c3 * x * y)
        exact = (
            c0 * rect.area
            + c1 * 0.5 * (rect.b**2 - rect.a**2) * rect.height
            + c2 * 0.5 * (rect.d**2 - rect.c**2) * rect.width
            + c3 * 0.25 * (rect.b**2 - rect.a**2) * (rect.d**2 - rect.c**2)
        )
        scale = 1.0 + abs(exact)
        assert abs(cq.trapezoid_estimate(f, rect) - exact) <= 1e-11 * scale
        assert abs(cq.midpoint_estimate(f, rect) - exact) <= 1e-11 * scale


class TestSimpleBounds:
    def test_trapezoid_sup_example(self, unit):
        nb = bundle("poly22", unit, cq.INF)
        comps = cq.trapezoid_bound(nb, unit)
        assert comps.total == pytest.approx(0.75, abs=1e-9)
        est = cq.trapezoid_estimate(integrand("poly22", unit), unit)
        actual = abs(est - 1.0 / 9.0)
        assert actual == pytest.approx(5.0 / 36.0, abs=1e-12)
        assert actual <= comps.total

    def test_midpoint_sup_example(self, unit):
        nb = bundle("poly22", unit, cq.INF, family="midpoint")
        comps = cq.midpoint_bound(nb, unit)
        assert comps.total == pytest.approx(0.5, abs=1e-9)
        est = cq.midpoint_estimate(integrand("poly22", unit), unit)
        assert abs(est - 1.0 / 9.0) == pytest.approx(7.0 / 144.0, abs=1e-12)

    def test_xy_sup_bounds(self, unit):
        nb = bundle("xy", unit, cq.INF)
        assert cq.trapezoid_bound(nb, unit).total == pytest.approx(0.3125, abs=1e-9)
        nbm = bundle("xy", unit, cq.INF, family="midpoint")
        assert cq.midpoint_bound(nbm, unit).total == pytest.approx(0.3125, abs=1e-9)

    def test_zero_norms_zero_bound(self, unit):
        nb = cq.DerivativeNorms(p=cq.INF, family="trapezoid", m=1, n=1, fxy=0.0,
                                fx_bottom=0, fx_top=0, fy_left=0, fy_right=0)
        assert cq.trapezoid_bound(nb, unit).total == 0.0

    def test_family_mismatch_rejected(self, unit):
        nb = bundle("xy", unit, cq.INF, family="midpoint")
        with pytest.raises(cq.NormMismatchError):
            cq.trapezoid_bound(nb, unit)

    def test_partition_mismatch_rejected(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        nb = bundle("xy", unit, 2, part=part)
        with pytest.raises(cq.NormMismatchError):
            cq.trapezoid_bound(nb, unit)
        with pytest.raises(cq.NormMismatchError):
            cq.composite_trapezoid_bound(nb, unit, cq.PartitionSpec(unit, 4, 4))


class TestCompositeBounds:
    def test_reduction_bit_for_bit(self, unit):
        part = cq.PartitionSpec(unit, 1, 1)
        for p in P_GRID:
            nb = bundle("expsum", unit, p)
            simple = cq.trapezoid_bound(nb, unit)
            comp = cq.composite_trapezoid_bound(nb, unit, part)
            assert (simple.fx_term, simple.fy_term, simple.fxy_term) == (
                comp.fx_term, comp.fy_term, comp.fxy_term)
            nbm = bundle("expsum", unit, p, family="midpoint")
            simple_m = cq.midpoint_bound(nbm, unit)
            comp_m = cq.composite_midpoint_bound(nbm, unit, part)
            assert (simple_m.fx_term, simple_m.fy_term, simple_m.fxy_term) == (
                comp_m.fx_term, comp_m.fy_term, comp_m.fxy_term)

    def test_composite_trapezoid_sup_certificate(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        f = integrand("poly22", unit)
        nb = bundle("poly22", unit, cq.INF, part=part)
        # S_x = 0 + 2*||2x*0.25||_inf + ||2x||_inf = 0 + 1 + 2 = 3 -> 3/32 each
        comps = cq.composite_trapezoid_bound(nb, unit, part)
        assert comps.fx_term == pytest.approx(3.0 / 32.0, abs=1e-9)
        assert comps.fy_term == pytest.approx(3.0 / 32.0, abs=1e-9)
        assert comps.fxy_term == pytest.approx(4.0 / 64.0, abs=1e-9)
        err = abs(cq.composite_trapezoid_estimate(f, unit, part) - 1.0 / 9.0)
        assert err <= comps.total

    def test_composite_midpoint_sup_certificate(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        f = integrand("poly22", unit)
        nb = bundle("poly22", unit, cq.INF, family="midpoint", part=part)
        comps = cq.composite_midpoint_bound(nb, unit, part)
        err = abs(cq.composite_midpoint_estimate(f, unit, part) - 1.0 / 9.0)
        assert err <= comps.total

    def test_fxy_term_scales_exactly(self, unit):
        f = integrand("sinsum", unit)
        prev = None
        for n in (1, 2, 4, 8):
            part = cq.PartitionSpec(unit, n, n)
            nb = cq.derivative_norms(f, unit, 2, partition=part, rule_family="midpoint",
                                     resolution=64)
            term = cq.composite_midpoint_bound(nb, unit, part).fxy_term
            if prev is not None:
                assert prev / term == pytest.approx(4.0, abs=1e-9)
            prev = term

    def test_bound_branch_continuity(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        for name in ("expsum", "sinsin"):
            for family, op in (
                ("trapezoid", cq.composite_trapezoid_bound),
                ("midpoint", cq.composite_midpoint_bound),
            ):
                big = op(bundle(name, unit, 1e6, family=family, part=part), unit, part).total
                inf = op(bundle(name, unit, cq.INF, family=family, part=part), unit, part).total
                assert abs(big - inf) <= 1e-3 * inf
                near1 = op(bundle(name, unit, 1 + 1e-6, family=family, part=part), unit, part).total
                one = op(bundle(name, unit, 1, family=family, part=part), unit, part).total
                assert abs(near1 - one) <= 1e-3 * one

    def test_provenance_notes(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        nb = bundle("xy", unit, 1, family="midpoint", part=part)
        comps = cq.composite_midpoint_bound(nb, unit, part)
        joined = " ".join(comps.notes)
        assert "midline" in joined
        assert "m=n=1 reduction" in joined


class TestUniformBounds:
    def test_simple_example(self, unit):
        ub = cq.UniformBounds(1.0, 1.0)
        assert cq.uniform_bound("trapezoid", ub, unit) == pytest.approx(0.5625)
        assert cq.uniform_bound("midpoint", ub, unit) == pytest.approx(0.5625)

    def test_zero(self, unit):
        assert cq.uniform_bound("trapezoid", cq.UniformBounds(0, 0), unit) == 0.0

    def test_composite_trapezoid_line_count(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        got = cq.uniform_bound("composite-trapezoid", cq.UniformBounds(1, 0), unit, part)
        assert got == pytest.approx(5.0 / 32.0 + 5.0 / 32.0)

    def test_composite_midpoint_corrected_n_term(self, unit):
        part = cq.PartitionSpec(unit, 2, 2)
        got = cq.uniform_bound("composite-midpoint", cq.UniformBounds(0, 1), unit, part)
        assert got == pytest.approx(1.0 / 64.0)

    def test_validation(self, unit):
        with pytest.raises(ValueError):
            cq.uniform_bound("composite-trapezoid", cq.UniformBounds(1, 1), unit)
        with pytest.raises(ValueError):
            cq.uniform_bound("simpson", cq.UniformBounds(1, 1), unit)

    def test_dominates_norm_bound(self, unit):
        # the M/N bound can never be tighter than the norm-based bound
        f = integrand("sinsum", unit)
        ub = cq.UniformBounds(np.sqrt(2.0), 1.0)
        for n in (1, 2, 4):
            part = cq.PartitionSpec(unit, n, n)
            nb = cq.derivative_norms(f, unit, cq.INF, partition=part,
                                     rule_family="midpoint", resolution=64)
            norm_based = cq.composite_midpoint_bound(nb, unit, part).total
            assert cq.uniform_bound("composite-midpoint", ub, unit, part) >= norm_based - 1e-12


class TestCustomPhiRule:
    def test_matches_trapezoid_for_its_alpha_beta(self, unit):
        w = cq.CustomPhi(lambda x: -unit.m2 * x + unit.m1 * unit.m2,
                         lambda y: -unit.m1 * y, unit)
        f = integrand("expsum", unit)
        report = cq.custom_phi_rule(f, w, unit, cq.INF, resolution=96)
        assert report.estimate == pytest.approx(cq.trapezoid_estimate(f, unit), rel=1e-13)
        err = abs(report.estimate - f.exact_integral)
        assert err <= report.bound
        # the five-term bound with these phi norms reproduces the
        # dedicated trapezoid coefficients
        nb = cq.derivative_norms(f, unit, cq.INF, resolution=96)
        assert report.bound == pytest.approx(cq.trapezoid_bound(nb, unit).total, rel=1e-6)

    def test_plain_xy_corner_combination(self, unit):
        w = cq.CustomPhi(lambda x: 0.0 * x, lambda y: 0.0 * y, unit)
        f = integrand("one", unit)
        report = cq.custom_phi_rule(f, w, unit, 2, resolution=96)
        assert report.estimate == pytest.approx(1.0)

    def test_zero_integrand(self, unit):
        w = cq.CustomPhi(lambda x: 0.0 * x, lambda y: 0.0 * y, unit)
        zero = cq.Integrand(
            f=lambda x, y: 0.0 * x, fx=lambda x, y: 0.0 * x,
            fy=lambda x, y: 0.0 * x, fxy=lambda x, y: 0.0 * x,
        )
        report = cq.custom_phi_rule(zero, w, unit, 2, resolution=96)
        assert report.estimate == 0.0
        assert report.bound == 0.0

    def test_builtin_rejected(self, unit):
        with pytest.raises(cq.UnsupportedVariantError):
            cq.custom_phi_rule(integrand("one", unit), cq.TrapezoidPhi(unit), unit, 2)


class TestOneDimensionalRules:
    def test_trapezoid_linear_exact(self):
        est, bound = cq.trapezoid_1d(lambda x: x, (0.0, 1.0), 2, 1.0)
        assert est == pytest.approx(0.5)
        assert bound >= 0.0

    def test_trapezoid_sup_branch(self):
        est, bound = cq.trapezoid_1d(lambda x: x * x, (0.0, 1.0), cq.INF, 2.0)
        assert bound == pytest.approx(0.5)
        assert abs(est - 1.0 / 3.0) == pytest.approx(1.0 / 6.0)
        assert abs(est - 1.0 / 3.0) <= bound

    def test_trapezoid_zero_norm(self):
        _, bound = cq.trapezoid_1d(lambda x: 1.0, (0.0, 2.0), 1, 0.0)
        assert bound == 0.0

    def test_midpoint_linear_exact(self):
        est, _ = cq.midpoint_1d(lambda x: x, (0.0, 1.0), 2, 1.0)
        assert est == pytest.approx(0.5)

    def test_midpoint_sup_branch(self):
        # bound = ||g'||_inf * ||omega||_1 with ||omega||_1 = (b-a)^2/4
        est, bound = cq.midpoint_1d(lambda x: x * x, (0.0, 1.0), cq.INF, 2.0)
        assert est == pytest.approx(0.25)
        assert bound == pytest.approx(2.0 * 0.25)
        assert abs(est - 1.0 / 3.0) == pytest.approx(1.0 / 12.0)
        assert abs(est - 1.0 / 3.0) <= bound

    def test_midpoint_omega_norm_numeric_cross_check(self):
        # ||omega||_q from the formula equals direct quadrature of the ramp
        from certquad.norms import LineSegment

        for p in (1, 1.5, 2, 3, cq.INF):
            q = cq.conjugate(p)
            _, bound = cq.midpoint_1d(lambda x: x, (0.0, 1.0), p, 1.0)
            seg = LineSegment("x", 0.0, 0.0, 1.0)
            omega = lambda x: np.where(x < 0.5, x, x - 1.0)
            direct = cq.line_norm(omega, seg, q, resolution=256)
            assert bound == pytest.approx(direct, rel=1e-9)

    def test_midpoint_zero_norm(self):
        _, bound = cq.midpoint_1d(lambda x: 1.0, (0.0, 2.0), 2, 0.0)
        assert bound == 0.0
