"""Numerical L^p norms of derivative restrictions on lines and rectangles.

Finite-p norms use composite Gauss-Legendre with panels split at detected
sign changes of the integrand (|g|^p has a kink wherever g crosses zero)
and graded toward panel ends, plus one refinement halving whose delta is
the reported error estimate.  p = infinity norms are grid maxima with
local refinement around the argmax; they are lower bounds of the
essential supremum that tighten under refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    DerivativeNorms,
    Exponent,
    Integrand,
    PartitionSpec,
    Rectangle,
)
from .gauss import (
    as_grid_fn,
    as_vector_fn,
    graded_breaks,
    merge_breaks,
    p_norm_from_samples,
    panel_nodes,
    refine_breaks,
    require_finite,
)

DEFAULT_RESOLUTION = 256


@dataclass(frozen=True)
class LineSegment:
    """A horizontal or vertical segment: the axis the coordinate runs along,
    the frozen transverse coordinate, and the coordinate range."""

    axis: str
    fixed_coordinate: float
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if self.axis not in ("x", "y"):
            raise ValueError("axis must be 'x' or 'y'")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def along_x(cls, rect: Rectangle, y: float) -> "LineSegment":
        if not rect.c <= y <= rect.d:
            raise ValueError(f"fixed coordinate {y} outside [{rect.c}, {rect.d}]")
        return cls("x", float(y), rect.a, rect.b)

    @classmethod
    def along_y(cls, rect: Rectangle, x: float) -> "LineSegment":
        if not rect.a <= x <= rect.b:
            raise ValueError(f"fixed coordinate {x} outside [{rect.a}, {rect.b}]")
        return cls("y", float(x), rect.c, rect.d)


def _zero_breaks(gv, lo: float, hi: float, resolution: int) -> np.ndarray:
    """Breakpoints at sign changes of g, refined by bisection."""
    xs = np.linspace(lo, hi, resolution + 1)
    vals = gv(xs)
    require_finite(vals, (xs,))
    zeros: list[float] = []
    exact = np.flatnonzero(vals == 0.0)
    if exact.size <= resolution // 2:
        zeros.extend(float(xs[i]) for i in exact if lo < xs[i] < hi)
    for i in np.flatnonzero(vals[:-1] * vals[1:] < 0.0):
        a, b = float(xs[i]), float(xs[i + 1])
        fa = float(vals[i])
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = float(gv(np.asarray([m]))[0])
            if fm == 0.0:
                a = b = m
                break
            if (fa < 0.0) == (fm < 0.0):
                a, fa = m, fm
            else:
                b = m
        zeros.append(0.5 * (a + b))
        if len(zeros) >= 32:
            break
    return merge_breaks([lo, hi], zeros)


def _graded_axis_nodes(breaks: np.ndarray, levels: int, max_frac: float, k: int = 8):
    span = breaks[-1] - breaks[0]
    pieces = [
        refine_breaks(graded_breaks(lo, hi, levels=levels), span * max_frac)
        for lo, hi in zip(breaks[:-1], breaks[1:])
    ]
    return panel_nodes(merge_breaks(*pieces), k)


def _sup_1d(gv, lo: float, hi: float, resolution: int) -> tuple[float, float]:
    best = 0.0
    first = None
    xs = np.linspace(lo, hi, resolution + 1)
    for _ in range(4):
        vals = np.abs(gv(xs))
        require_finite(vals, (xs,))
        i = int(np.argmax(vals))
        best = max(best, float(vals[i]))
        if first is None:
            first = best
        xs = np.linspace(xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)], 65)
    return best, best - first


def line_norm_with_error(g, seg: LineSegment, p, resolution: int = DEFAULT_RESOLUTION):
    """(int |g|^p)^(1/p) over the segment, plus an internal error estimate.

    The estimate is the change under one panel-refinement halving (plus a
    floating-point floor); the sup norm reports its refinement gain.
    """
    p = Exponent.coerce(p)
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    gv = as_vector_fn(g)
    if p.is_infinite:
        value, gain = _sup_1d(gv, seg.lo, seg.hi, resolution)
        return value, abs(gain) + 1e-15 * (1.0 + value)
    breaks = _zero_breaks(gv, seg.lo, seg.hi, resolution)
    max_frac = 1.0 / max(4, resolution // 32)

    def one_pass(levels: int, frac: float) -> float:
        x, w = _graded_axis_nodes(breaks, levels, frac)
        vals = gv(x)
        require_finite(vals, (x,))
        return p_norm_from_samples(vals, w, p.value)

    coarse = one_pass(11, max_frac)
    fine = one_pass(12, max_frac / 2.0)
    return fine, abs(fine - coarse) + 1e-15 * (1.0 + abs(fine))


def line_norm(g, seg: LineSegment, p, resolution: int = DEFAULT_RESOLUTION) -> float:
    """One-variable L^p norm of g over the segment."""
    return line_norm_with_error(g, seg, p, resolution)[0]


def _sup_2d(fv, rect: Rectangle, resolution: int) -> tuple[float, float]:
    best = 0.0
    first = None
    nx = min(resolution, 256)
    xs = np.linspace(rect.a, rect.b, nx + 1)
    ys = np.linspace(rect.c, rect.d, nx + 1)
    for _ in range(3):
        vals = np.abs(fv(xs[:, None], ys[None, :]))
        require_finite(vals, (xs[:, None], ys[None, :]))
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        best = max(best, float(vals[i, j]))
        if first is None:
            first = best
        xs = np.linspace(xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)], 33)
        ys = np.linspace(ys[max(j - 1, 0)], ys[min(j + 1, ys.size - 1)], 33)
    return best, best - first


def area_norm_with_error(g, rect: Rectangle, p, resolution: int = DEFAULT_RESOLUTION):
    """(int int |g|^p)^(1/p) over the rectangle, plus an error estimate.

    Panel breakpoints include zero crossings of g detected along two scan
    lines per axis, which captures the axis-aligned kink lines of
    separable integrands.
    """
    p = Exponent.coerce(p)
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    fv = as_grid_fn(g)
    if p.is_infinite:
        value, gain = _sup_2d(fv, rect, resolution)
        return value, abs(gain) + 1e-15 * (1.0 + value)

    scan = min(resolution, 192)
    xbreaks: list[np.ndarray] = []
    ybreaks: list[np.ndarray] = []
    for off in (0.155, -0.237):
        yline = rect.m2 + off * rect.height
        xbreaks.append(_zero_breaks(lambda t: fv(t, np.full_like(t, yline)), rect.a, rect.b, scan))
        xline = rect.m1 + off * rect.width
        ybreaks.append(_zero_breaks(lambda t: fv(np.full_like(t, xline), t), rect.c, rect.d, scan))
    bx = merge_breaks(*xbreaks)
    by = merge_breaks(*ybreaks)
    max_frac = 1.0 / max(4, resolution // 32)

    def one_pass(levels: int, frac: float) -> float:
        x, wx = _graded_axis_nodes(bx, levels, frac)
        y, wy = _graded_axis_nodes(by, levels, frac)
        vals = fv(x[:, None], y[None, :])
        require_finite(vals, (x[:, None], y[None, :]))
        return p_norm_from_samples(vals, np.outer(wx, wy), p.value)

    coarse = one_pass(9, max_frac)
    fine = one_pass(10, max_frac / 2.0)
    return fine, abs(fine - coarse) + 1e-15 * (1.0 + abs(fine))


def area_norm(g, rect: Rectangle, p, resolution: int = DEFAULT_RESOLUTION) -> float:
    """Two-variable L^p norm of g over the rectangle."""
    return area_norm_with_error(g, rect, p, resolution)[0]


def finite_difference_partials(f, rect: Rectangle):
    """Centered-difference evaluators (fx, fy, fxy) for a plain f(x, y).

    Step h is 1e-5 of the axis extent; stencils shift one-sided at the
    rectangle edges.  The mixed partial uses the 4-point cross stencil.
    """
    fv = as_grid_fn(f)
    hx = rect.width * 1e-5
    hy = rect.height * 1e-5

    def shifted(x, h, lo, hi):
        xp = np.minimum(np.asarray(x, dtype=float) + h, hi)
        xm = np.maximum(np.asarray(x, dtype=float) - h, lo)
        return xp, xm

    def fx(x, y):
        xp, xm = shifted(x, hx, rect.a, rect.b)
        return (fv(xp, y) - fv(xm, y)) / (xp - xm)

    def fy(x, y):
        yp, ym = shifted(y, hy, rect.c, rect.d)
        return (fv(x, yp) - fv(x, ym)) / (yp - ym)

    def fxy(x, y):
        xp, xm = shifted(x, hx, rect.a, rect.b)
        yp, ym = shifted(y, hy, rect.c, rect.d)
        return (fv(xp, yp) - fv(xp, ym) - fv(xm, yp) + fv(xm, ym)) / ((xp - xm) * (yp - ym))

    return fx, fy, fxy


def partial_evaluators(f: Integrand, rect: Rectangle, fd_fallback: bool = True):
    """Vectorized (fx, fy, fxy, analytic_flag) for an integrand."""
    if f.has_partials:
        return as_grid_fn(f.fx), as_grid_fn(f.fy), as_grid_fn(f.fxy), True
    if not fd_fallback:
        raise ConfigurationError(
            f"integrand {f.label or '<anonymous>'} lacks analytic partials "
            "and the finite-difference fallback is disabled"
        )
    fx, fy, fxy = finite_difference_partials(f.f, rect)
    return fx, fy, fxy, False


def derivative_norms(
    f: Integrand,
    rect: Rectangle,
    p,
    partition: PartitionSpec | None = None,
    rule_family: str = "trapezoid",
    resolution: int = DEFAULT_RESOLUTION,
    fd_fallback: bool = True,
    cache: dict | None = None,
) -> DerivativeNorms:
    """Build the norm bundle a certified bound needs.

    trapezoid family: boundary-line norms of f_x (y = c, d) and f_y
    (x = a, b) plus interior grid-line norms for a composite partition.
    midpoint family: cell-midline norms of f_x (y = n_j) and f_y
    (x = m_i).  Both include ||f_xy||_p over the rectangle.  ``cache``
    memoizes line norms across partitions of the same integrand.
    """
    p = Exponent.coerce(p)
    if rule_family not in ("trapezoid", "midpoint"):
        raise ValueError(f"unknown rule family {rule_family!r}")
    part = partition if partition is not None else PartitionSpec(rect, 1, 1)
    if part.rect != rect:
        raise ValueError("partition was built for a different rectangle")
    fx, fy, fxy, analytic = partial_evaluators(f, rect, fd_fallback)
    source = "analytic" if analytic else "numeric"
    pkey = str(p)

    def memo(key, compute):
        if cache is None:
            return compute()
        full = key + (pkey, resolution)
        if full not in cache:
            cache[full] = compute()
        return cache[full]

    def x_line(yfix: float) -> float:
        seg = LineSegment.along_x(rect, yfix)
        return memo(
            ("fx", round(yfix, 15)),
            lambda: line_norm(lambda t: fx(t, np.full_like(t, yfix)), seg, p, resolution),
        )

    def y_line(xfix: float) -> float:
        seg = LineSegment.along_y(rect, xfix)
        return memo(
            ("fy", round(xfix, 15)),
            lambda: line_norm(lambda t: fy(np.full_like(t, xfix), t), seg, p, resolution),
        )

    fxy_norm = memo(("fxy",), lambda: area_norm(fxy, rect, p, resolution))
    prov = {"fxy": source}

    if rule_family == "trapezoid":
        ys = part.y_nodes()
        xs = part.x_nodes()
        bundle = DerivativeNorms(
            p=p,
            family="trapezoid",
            m=part.m,
            n=part.n,
            fxy=fxy_norm,
            fx_bottom=x_line(rect.c),
            fx_top=x_line(rect.d),
            fy_left=y_line(rect.a),
            fy_right=y_line(rect.b),
            interior_x_lines=tuple(x_line(float(ys[j])) for j in range(1, part.n)),
            interior_y_lines=tuple(y_line(float(xs[i])) for i in range(1, part.m)),
            provenance={
                **prov,
                "fx_bottom": source,
                "fx_top": source,
                "fy_left": source,
                "fy_right": source,
                "interior_x_lines": source,
                "interior_y_lines": source,
            },
        )
    else:
        bundle = DerivativeNorms(
            p=p,
            family="midpoint",
            m=part.m,
            n=part.n,
            fxy=fxy_norm,
            interior_x_lines=tuple(x_line(float(v)) for v in part.y_mids()),
            interior_y_lines=tuple(y_line(float(v)) for v in part.x_mids()),
            provenance={**prov, "interior_x_lines": source, "interior_y_lines": source},
        )
    return bundle
