import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import certquad as cq
from conftest import RECT_SET

Q_GRID = (1, 1.5, 2, 3, cq.INF)


def make_variants(rect):
    out = [cq.TrapezoidPhi(rect), cq.MidpointPhi(rect)]
    for m, n in ((1, 1), (1, 2), (2, 1), (2, 2), (4, 2), (4, 4)):
        part = cq.PartitionSpec(rect, m, n)
        out.append(cq.CompositeTrapezoidPhi(rect, part))
        out.append(cq.CompositeMidpointPhi(rect, part))
    return out


class TestEvalPhi:
    def test_trapezoid_corner(self, unit):
        assert cq.eval_phi(cq.TrapezoidPhi(unit), 0.0, 0.0) == pytest.approx(0.25)

    def test_midpoint_interior(self, sym):
        # piece for 0 < s, t <= 1 is (s-1)(t-1)
        assert cq.eval_phi(cq.MidpointPhi(sym), 0.5, 0.5) == pytest.approx(0.25)

    def test_midpoint_boundary_vanishes(self, sym):
        w = cq.MidpointPhi(sym)
        for t in np.linspace(-1, 1, 7):
            assert cq.eval_phi(w, 1.0, t) == 0.0

    def test_seam_uses_larger_coordinate_piece(self, sym):
        # at s = 0 the piece 0 < s <= 1 applies: (0-1)(t-1) = 1-t
        w = cq.MidpointPhi(sym)
        assert cq.eval_phi(w, 0.0, 0.5) == pytest.approx(0.5)
        assert cq.eval_phi(w, 0.0, 0.0) == pytest.approx(1.0)

    def test_outside_rect_rejected(self, unit):
        with pytest.raises(cq.DomainError):
            cq.eval_phi(cq.TrapezoidPhi(unit), 1.5, 0.5)

    def test_custom_reduces_to_product(self, unit):
        w = cq.CustomPhi(lambda x: -unit.m2 * x + unit.m1 * unit.m2,
                         lambda y: -unit.m1 * y, unit)
        ref = cq.TrapezoidPhi(unit)
        for x, y in ((0.2, 0.7), (0.0, 1.0), (0.5, 0.5)):
            assert cq.eval_phi(w, x, y) == pytest.approx(cq.eval_phi(ref, x, y), abs=1e-15)


class TestBoundaryVanishing:
    @pytest.mark.parametrize("composite", [False, True])
    def test_thousand_random_boundary_points(self, composite):
        rng = np.random.default_rng(42)
        rect = cq.Rectangle(-2.0, 3.0, 1.0, 4.0)
        if composite:
            w = cq.CompositeMidpointPhi(rect, cq.PartitionSpec(rect, 3, 2))
        else:
            w = cq.MidpointPhi(rect)
        for _ in range(1000):
            edge = rng.integers(4)
            t = rng.uniform()
            if edge == 0:
                x, y = rect.a, rect.c + t * rect.height
            elif edge == 1:
                x, y = rect.b, rect.c + t * rect.height
            elif edge == 2:
                x, y = rect.a + t * rect.width, rect.c
            else:
                x, y = rect.a + t * rect.width, rect.d
            assert cq.eval_phi(w, x, y) == 0.0


class TestClosedNorms:
    def test_psi_values(self, sym):
        w = cq.TrapezoidPhi(sym)
        assert cq.phi_norm_closed(w, 2) == pytest.approx(2.0 / 3.0, rel=1e-14)
        assert cq.phi_norm_closed(w, 1) == pytest.approx(1.0, rel=1e-14)
        assert cq.phi_norm_closed(w, cq.INF) == pytest.approx(1.0, rel=1e-14)

    def test_composite_midpoint_unit_q1(self, unit):
        w = cq.CompositeMidpointPhi(unit, cq.PartitionSpec(unit, 1, 1))
        # 4 * (int_0^(1/2) x dx)^2 = 4 * (1/8)^2
        assert cq.phi_norm_closed(w, 1) == pytest.approx(4.0 * (1.0 / 8.0) ** 2, rel=1e-14)

    def test_custom_unsupported(self, sym):
        w = cq.CustomPhi(lambda x: 0.0 * x, lambda y: 0.0 * y, sym)
        with pytest.raises(cq.UnsupportedVariantError):
            cq.phi_norm_closed(w, 2)

    def test_scaling_covariance(self):
        # mapping [-1,1]^2 -> rect multiplies the q-norm by
        # (W/2)^(1+1/q) (H/2)^(1+1/q)
        base = cq.phi_norm_closed(cq.TrapezoidPhi(cq.Rectangle.symmetric()), 3)
        rect = cq.Rectangle(0.0, 3.0, -1.0, 1.5)
        scale = (rect.width / 2.0) ** (1 + 1 / 3.0) * (rect.height / 2.0) ** (1 + 1 / 3.0)
        assert cq.phi_norm_closed(cq.TrapezoidPhi(rect), 3) == pytest.approx(base * scale, rel=1e-13)

    def test_edge_norms(self, unit):
        w = cq.TrapezoidPhi(unit)
        # ||phi(., c)||_2 = (H/2) * (W/2)^(3/2) * (2/3)^(1/2)
        expect = 0.5 * 0.5**1.5 * (2.0 / 3.0) ** 0.5
        assert cq.phi_edge_norm_closed(w, 2, "bottom") == pytest.approx(expect, rel=1e-14)
        assert cq.phi_edge_norm_closed(cq.MidpointPhi(unit), 2, "bottom") == 0.0


class TestNumericAudit:
    @pytest.mark.parametrize("rect", RECT_SET, ids=[str(i) for i in range(len(RECT_SET))])
    def test_closed_vs_numeric_across_variants(self, rect):
        for w in make_variants(rect):
            for q in Q_GRID:
                closed = cq.phi_norm_closed(w, q)
                numeric = cq.phi_norm_numeric(w, q, resolution=128)
                assert abs(closed - numeric) <= 1e-6 * (1.0 + closed), (
                    w.variant, q, closed, numeric)

    def test_numeric_examples(self, sym):
        assert cq.phi_norm_numeric(cq.TrapezoidPhi(sym), 2, 256) == pytest.approx(
            2.0 / 3.0, abs=1e-8)
        assert cq.phi_norm_numeric(cq.MidpointPhi(sym), cq.INF) == pytest.approx(1.0, abs=1e-12)
        psi = cq.CustomPhi(lambda s: 0.0 * s, lambda t: 0.0 * t, sym)
        assert cq.phi_norm_numeric(psi, 1) == pytest.approx(1.0, abs=1e-9)

    def test_resolution_validated(self, sym):
        with pytest.raises(ValueError):
            cq.phi_norm_numeric(cq.TrapezoidPhi(sym), 2, resolution=4)


@given(
    st.floats(min_value=-0.99, max_value=0.99),
    st.floats(min_value=-0.99, max_value=0.99),
)
def test_custom_phi_matches_definition(x, y):
    sym = cq.Rectangle.symmetric()
    w = cq.CustomPhi(lambda s: np.asarray(s) ** 2, lambda t: -3.0 * np.asarray(t), sym)
    assert cq.eval_phi(w, x, y) == pytest.approx(x * y + x**2 - 3.0 * y, rel=1e-12, abs=1e-12)
