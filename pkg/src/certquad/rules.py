"""Quadrature estimates and their certified error bounds.

Each rule pairs a sampling formula with an a-priori bound on
|estimate - integral| assembled from L^p norms of f_x, f_y and f_xy via
Holder's inequality.  With W = b - a, H = d - c, C = C(p) the Holder
coefficient and e = 2 - 1/p (so e = 1 at p = 1 and e = 2 at p = inf),
the per-term coefficients on an m x n partition are:

  corner-sampling (trapezoid) family:
      fx: H W^e C / (4mn)   fy: W H^e C / (4mn)   fxy: W^e H^e C^2 / (4mn)
      applied to S_x = ||f_x(.,c)|| + 2 sum_{j=1..n-1} ||f_x(.,y_j)|| + ||f_x(.,d)||
      and the analogous S_y (boundary lines once, interior lines twice);

  midline-sampling (midpoint) family:
      fx: H W^e C / (2mn)   fy: W H^e C / (2mn)   fxy: W^e H^e C^2 / (4mn)
      applied to S_x = sum_j ||f_x(., n_j)||, S_y = sum_i ||f_y(m_i, .)||.

The single formula reproduces all three exponent branches exactly
(C(1) = 1, C(inf) = 1/2), and m = n = 1 reduces the composite bounds to
the simple ones bit for bit because the code path is shared.

The midpoint-family coefficients follow the one-dimensional sawtooth
identity ||ramp||_q = C(p) L^(2-1/p) / (2m); a variant scaling the
denominators by m^(1-1/p) (and an f_xy term /(4mn) at p = inf) fails the
m = n = 1 reduction and the numeric weight-norm audit, so it is not
used.  Likewise the p = 1 midpoint y-term pairs ||f_y(m1,.)||_1 (the
midline) with ||ramp||_inf, not a boundary-line norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DerivativeNorms,
    EvaluationError,
    Exponent,
    Integrand,
    NormMismatchError,
    PartitionSpec,
    QuadratureReport,
    Rectangle,
    UniformBounds,
    UnsupportedVariantError,
    conjugate,
    holder_coefficient,
)
from .gauss import as_grid_fn, require_finite
from .norms import LineSegment, derivative_norms, line_norm
from .weights import CustomPhi, phi_norm_numeric

NOTE_MIDLINE_P1 = (
    "p=1 y-term uses the midline norm ||f_y(m1,.)||_1, pairing the error "
    "integral along x = m1 with ||ramp||_inf; a boundary-line norm would "
    "not bound that integral"
)
NOTE_COMPOSITE_MIDPOINT = (
    "composite-midpoint coefficients: line terms C(p) W^(2-1/p) H/(2mn) and "
    "f_xy term C(p)^2 (WH)^(2-1/p)/(4mn) [(WH)^2/(16mn) at p=inf] from "
    "||sawtooth||_q = C(p) L^(2-1/p)/(2m); the m^(1-1/p)-scaled variant "
    "[f_xy /(4mn) at p=inf] fails the m=n=1 reduction and is not used"
)
NOTE_CELL_SUMMED = (
    "composite-trapezoid estimate is the cell-summed corner rule (interior "
    "grid points weighted 4, edges 2, corners 1); the telescoped "
    "boundary-only display is not constant-exact for m, n > 1"
)


@dataclass(frozen=True)
class BoundComponents:
    """The three named terms of a certified bound; total is their exact sum."""

    fx_term: float
    fy_term: float
    fxy_term: float
    notes: tuple[str, ...] = ()

    @property
    def total(self) -> float:
        return self.fx_term + self.fy_term + self.fxy_term


def _require_bundle(norms: DerivativeNorms, family: str, m: int, n: int) -> None:
    if not norms.matches(family, m, n):
        raise NormMismatchError(
            f"norm bundle built for family={norms.family!r} m={norms.m} n={norms.n}, "
            f"rule needs family={family!r} m={m} n={n}"
        )


def _coefficients(p: Exponent, rect: Rectangle, m: int, n: int, family: str):
    W, H = rect.width, rect.height
    e = 2.0 - p.reciprocal
    C = holder_coefficient(p)
    We, He = W**e, H**e
    mn = float(m * n)
    if family == "trapezoid":
        return H * We * C / (4.0 * mn), W * He * C / (4.0 * mn), We * He * C * C / (4.0 * mn)
    return H * We * C / (2.0 * mn), W * He * C / (2.0 * mn), We * He * C * C / (4.0 * mn)


def _corner_components(norms: DerivativeNorms, rect: Rectangle, m: int, n: int) -> BoundComponents:
    _require_bundle(norms, "trapezoid", m, n)
    cx, cy, cxy = _coefficients(norms.p, rect, m, n, "trapezoid")
    sx = norms.fx_bottom + 2.0 * sum(norms.interior_x_lines) + norms.fx_top
    sy = norms.fy_left + 2.0 * sum(norms.interior_y_lines) + norms.fy_right
    notes = (NOTE_CELL_SUMMED,) if m * n > 1 else ()
    return BoundComponents(sx * cx, sy * cy, norms.fxy * cxy, notes)


def _midline_components(norms: DerivativeNorms, rect: Rectangle, m: int, n: int) -> BoundComponents:
    _require_bundle(norms, "midpoint", m, n)
    cx, cy, cxy = _coefficients(norms.p, rect, m, n, "midpoint")
    sx = sum(norms.interior_x_lines)
    sy = sum(norms.interior_y_lines)
    notes = []
    if norms.p.is_one:
        notes.append(NOTE_MIDLINE_P1)
    if m * n > 1:
        notes.append(NOTE_COMPOSITE_MIDPOINT)
    return BoundComponents(sx * cx, sy * cy, norms.fxy * cxy, tuple(notes))


def _corner_grid_estimate(f: Integrand, part: PartitionSpec) -> float:
    xs, ys = part.x_nodes(), part.y_nodes()
    vals = as_grid_fn(f.f)(xs[:, None], ys[None, :])
    require_finite(vals, (xs[:, None], ys[None, :]))
    wx = np.ones(part.m + 1)
    wx[1:-1] = 2.0
    wy = np.ones(part.n + 1)
    wy[1:-1] = 2.0
    return float(wx @ vals @ wy) * (part.dx * part.dy / 4.0)


def _midpoint_grid_estimate(f: Integrand, part: PartitionSpec) -> float:
    xm, ym = part.x_mids(), part.y_mids()
    vals = as_grid_fn(f.f)(xm[:, None], ym[None, :])
    require_finite(vals, (xm[:, None], ym[None, :]))
    return float(vals.sum()) * (part.dx * part.dy)


def trapezoid_estimate(f: Integrand, rect: Rectangle) -> float:
    """Corner average times area: [f(a,c)+f(b,d)+f(a,d)+f(b,c)] W H / 4."""
    return _corner_grid_estimate(f, PartitionSpec(rect, 1, 1))


def midpoint_estimate(f: Integrand, rect: Rectangle) -> float:
    """Center sample times area: f(m1, m2) W H."""
    return _midpoint_grid_estimate(f, PartitionSpec(rect, 1, 1))


def composite_trapezoid_estimate(f: Integrand, rect: Rectangle, part: PartitionSpec) -> float:
    """Cell-summed corner rule on the m x n partition.

    Interior grid points carry weight 4, edge points 2, corners 1, times
    dx dy / 4; this reproduces constants exactly and is the estimate the
    composite bound certifies.
    """
    if part.rect != rect:
        raise ValueError("partition was built for a different rectangle")
    return _corner_grid_estimate(f, part)


def composite_trapezoid_estimate_boundary_only(
    f: Integrand, rect: Rectangle, part: PartitionSpec
) -> float:
    """The telescoped boundary-only display (documented, not certified).

    Samples only the rectangle boundary: corners once, edge-interior grid
    points twice, times W H / (4mn).  For m, n > 1 it drops the
    interior-cell corner contributions of the cell-summed rule and fails
    constant exactness (e.g. m=2, n=3 on the unit square gives 2/3);
    kept so the discrepancy is checkable.
    """
    if part.rect != rect:
        raise ValueError("partition was built for a different rectangle")
    fv = as_grid_fn(f.f)
    xs, ys = part.x_nodes(), part.y_nodes()
    corners = fv(np.asarray([rect.a, rect.b, rect.a, rect.b]), np.asarray([rect.c, rect.c, rect.d, rect.d]))
    total = float(corners.sum())
    if part.n > 1:
        yj = ys[1:-1]
        total += 2.0 * float(fv(np.full_like(yj, rect.a), yj).sum())
        total += 2.0 * float(fv(np.full_like(yj, rect.b), yj).sum())
    if part.m > 1:
        xi = xs[1:-1]
        total += 2.0 * float(fv(xi, np.full_like(xi, rect.c)).sum())
        total += 2.0 * float(fv(xi, np.full_like(xi, rect.d)).sum())
    return total * rect.width * rect.height / (4.0 * part.m * part.n)


def composite_midpoint_estimate(f: Integrand, rect: Rectangle, part: PartitionSpec) -> float:
    """Mean of cell-midpoint samples times area."""
    if part.rect != rect:
        raise ValueError("partition was built for a different rectangle")
    return _midpoint_grid_estimate(f, part)


def trapezoid_bound(norms: DerivativeNorms, rect: Rectangle) -> BoundComponents:
    """Certified bound for the simple corner rule (m = n = 1 bundle)."""
    return _corner_components(norms, rect, 1, 1)


def midpoint_bound(norms: DerivativeNorms, rect: Rectangle) -> BoundComponents:
    """Certified bound for the simple center rule (m = n = 1 bundle)."""
    return _midline_components(norms, rect, 1, 1)


def composite_trapezoid_bound(
    norms: DerivativeNorms, rect: Rectangle, part: PartitionSpec
) -> BoundComponents:
    """Certified bound for the cell-summed corner rule."""
    if part.rect != rect:
        raise ValueError("partition was built for a different rectangle")
    return _corner_components(norms, rect, part.m, part.n)


def composite_midpoint_bound(
    norms: DerivativeNorms, rect: Rectangle, part: PartitionSpec
) -> BoundComponents:
    """Certified bound for the composite center rule."""
    if part.rect != rect:
        raise ValueError("partition was built for a different rectangle")
    return _midline_components(norms, rect, part.m, part.n)


def uniform_bound(
    rule_family: str, ub: UniformBounds, rect: Rectangle, part: PartitionSpec | None = None
) -> float:
    """Bound from pointwise bounds |grad f| <= M, |f_xy| <= N alone.

    composite-trapezoid keeps the conservative (2n+1), (2m+1) line-count
    factors; the composite-midpoint N-term is W^2 H^2 / (16mn), matching
    the m = n = 1 reduction.
    """
    W, H = rect.width, rect.height
    M, N = ub.M, ub.N
    if rule_family in ("trapezoid", "midpoint"):
        return M * W * W * H / 4.0 + M * W * H * H / 4.0 + N * W * W * H * H / 16.0
    if part is None:
        raise ValueError(f"rule family {rule_family!r} needs a partition")
    m, n = part.m, part.n
    if rule_family == "composite-trapezoid":
        return (
            M * (2 * n + 1) * H * W * W / (8.0 * m * n)
            + M * (2 * m + 1) * W * H * H / (8.0 * m * n)
            + N * W * W * H * H / (16.0 * m * n)
        )
    if rule_family == "composite-midpoint":
        return (
            M * W * W * H / (4.0 * m)
            + M * W * H * H / (4.0 * n)
            + N * W * W * H * H / (16.0 * m * n)
        )
    raise ValueError(f"unknown rule family {rule_family!r}")


def custom_phi_rule(
    f: Integrand,
    w: CustomPhi,
    rect: Rectangle,
    p,
    resolution: int = 256,
) -> QuadratureReport:
    """Generic phi-weighted corner rule with the five-term Holder bound.

    estimate = f(a,c)phi(a,c) + f(b,d)phi(b,d) - f(a,d)phi(a,d) - f(b,c)phi(b,c);
    |error| <= sum of ||f_x(.,c)||_p ||phi(.,c)||_q + ... + ||f_xy||_p ||phi||_q,
    with the phi-norms computed numerically.
    """
    if not isinstance(w, CustomPhi):
        raise UnsupportedVariantError("custom_phi_rule requires a CustomPhi weight")
    if w.rect != rect:
        raise ValueError("weight was built for a different rectangle")
    p = Exponent.coerce(p)
    q = conjugate(p)
    fv = as_grid_fn(f.f)
    corners_x = np.asarray([rect.a, rect.b, rect.a, rect.b])
    corners_y = np.asarray([rect.c, rect.d, rect.d, rect.c])
    fvals = fv(corners_x, corners_y)
    require_finite(fvals, (corners_x, corners_y))
    phis = w.eval_grid(corners_x, corners_y)
    require_finite(phis, (corners_x, corners_y))
    signs = np.asarray([1.0, 1.0, -1.0, -1.0])
    estimate = float(np.dot(signs, fvals * phis))

    bundle = derivative_norms(f, rect, p, rule_family="trapezoid", resolution=resolution)
    phi_bottom = line_norm(
        lambda t: w.eval_grid(t, np.full_like(t, rect.c)),
        LineSegment.along_x(rect, rect.c), q, resolution,
    )
    phi_top = line_norm(
        lambda t: w.eval_grid(t, np.full_like(t, rect.d)),
        LineSegment.along_x(rect, rect.d), q, resolution,
    )
    phi_left = line_norm(
        lambda t: w.eval_grid(np.full_like(t, rect.a), t),
        LineSegment.along_y(rect, rect.a), q, resolution,
    )
    phi_right = line_norm(
        lambda t: w.eval_grid(np.full_like(t, rect.b), t),
        LineSegment.along_y(rect, rect.b), q, resolution,
    )
    phi_area = phi_norm_numeric(w, q, resolution)
    fx_term = bundle.fx_bottom * phi_bottom + bundle.fx_top * phi_top
    fy_term = bundle.fy_left * phi_left + bundle.fy_right * phi_right
    fxy_term = bundle.fxy * phi_area
    return QuadratureReport(
        rule_id="custom-phi",
        estimate=estimate,
        fx_term=fx_term,
        fy_term=fy_term,
        fxy_term=fxy_term,
        p=p,
        partition=None,
        norms_used=bundle,
        notes=("phi norms computed numerically (L^q, q conjugate to p)",),
    )


def trapezoid_1d(g, interval: tuple[float, float], p, norm_gprime: float):
    """One-variable endpoint rule: ([g(a)+g(b)] L/2, ||g'||_p C(p) L^(2-1/p) / 2)."""
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    p = Exponent.coerce(p)
    ga, gb = float(g(lo)), float(g(hi))
    if not (math.isfinite(ga) and math.isfinite(gb)):
        raise EvaluationError("non-finite endpoint value", coordinate=(lo, hi))
    length = hi - lo
    estimate = (ga + gb) * length / 2.0
    bound = float(norm_gprime) * holder_coefficient(p) * length ** (2.0 - p.reciprocal) / 2.0
    return estimate, bound


def midpoint_1d(g, interval: tuple[float, float], p, norm_gprime: float):
    """One-variable center rule: (g(m) L, ||g'||_p ||omega||_q).

    omega ramps from 0 at each endpoint to L/2 at the center, so
    ||omega||_q = (2/(q+1))^(1/q) (L/2)^(1+1/q), and L/2 at q = inf.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    p = Exponent.coerce(p)
    gm = float(g(0.5 * (lo + hi)))
    if not math.isfinite(gm):
        raise EvaluationError("non-finite midpoint value", coordinate=0.5 * (lo + hi))
    length = hi - lo
    estimate = gm * length
    q = conjugate(p)
    if q.is_infinite:
        omega = length / 2.0
    else:
        qq = q.value
        omega = (2.0 / (qq + 1.0)) ** (1.0 / qq) * (length / 2.0) ** (1.0 + 1.0 / qq)
    return estimate, float(norm_gprime) * omega


def _report(rule_id, estimate, comps, p, part, norms) -> QuadratureReport:
    return QuadratureReport(
        rule_id=rule_id,
        estimate=estimate,
        fx_term=comps.fx_term,
        fy_term=comps.fy_term,
        fxy_term=comps.fxy_term,
        p=p,
        partition=part,
        norms_used=norms,
        notes=comps.notes,
    )


def trapezoid_report(f: Integrand, rect: Rectangle, norms: DerivativeNorms) -> QuadratureReport:
    return _report("trapezoid", trapezoid_estimate(f, rect), trapezoid_bound(norms, rect), norms.p, None, norms)


def midpoint_report(f: Integrand, rect: Rectangle, norms: DerivativeNorms) -> QuadratureReport:
    return _report("midpoint", midpoint_estimate(f, rect), midpoint_bound(norms, rect), norms.p, None, norms)


def composite_trapezoid_report(
    f: Integrand, rect: Rectangle, part: PartitionSpec, norms: DerivativeNorms
) -> QuadratureReport:
    return _report(
        "composite-trapezoid",
        composite_trapezoid_estimate(f, rect, part),
        composite_trapezoid_bound(norms, rect, part),
        norms.p,
        part,
        norms,
    )


def composite_midpoint_report(
    f: Integrand, rect: Rectangle, part: PartitionSpec, norms: DerivativeNorms
) -> QuadratureReport:
    return _report(
        "composite-midpoint",
        composite_midpoint_estimate(f, rect, part),
        composite_midpoint_bound(norms, rect, part),
        norms.p,
        part,
        norms,
    )
