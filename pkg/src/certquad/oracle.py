"""Ground truth: reference integration and the parts-identity residual.

The reference integrator is tensor-product Gauss-Legendre with dyadic
panel refinement until two successive refinements agree to the target
tolerance.  The parts-identity residual numerically compares

    int int f  =  corner terms + edge integrals + int int f_xy phi

piece by piece over the smooth pieces of a unit-mixed-partial weight;
it is the designated admissibility guard for any new weight variant.
"""

from __future__ import annotations

import numpy as np

from .core import (
    ConfigurationError,
    Integrand,
    QuadratureConvergenceError,
    Rectangle,
)
from .gauss import as_grid_fn, panel_nodes, require_finite
from .weights import WeightFunction

MAX_PANELS_PER_AXIS = 1024  # 1024^2 = 2^20 two-dimensional panels


def oracle_integrate(f: Integrand, rect: Rectangle, target_tol: float = 1e-12):
    """Reference value of the double integral and a refinement-delta error.

    A known ``exact_integral`` on the integrand overrides the quadrature
    (error 0).  Raises QuadratureConvergenceError, carrying the best
    value, if the panel budget is exhausted first.
    """
    if target_tol < 1e-13:
        raise ValueError("target_tol must be >= 1e-13")
    if f.exact_integral is not None:
        return float(f.exact_integral), 0.0
    fv = as_grid_fn(f.f)
    prev = None
    value = None
    delta = np.inf
    panels = 4
    while panels <= MAX_PANELS_PER_AXIS:
        xs, wx = panel_nodes(np.linspace(rect.a, rect.b, panels + 1), 16)
        ys, wy = panel_nodes(np.linspace(rect.c, rect.d, panels + 1), 16)
        vals = fv(xs[:, None], ys[None, :])
        require_finite(vals, (xs[:, None], ys[None, :]))
        value = float(wx @ vals @ wy)
        if prev is not None:
            delta = abs(value - prev)
            if delta < target_tol:
                return value, delta
        prev = value
        panels *= 2
    raise QuadratureConvergenceError(
        f"no convergence to {target_tol} within {MAX_PANELS_PER_AXIS} panels per axis",
        best_value=value,
        error_estimate=delta,
    )


def parts_identity_sides(
    f: Integrand, w: WeightFunction, rect: Rectangle, resolution: int = 64
) -> tuple[float, float]:
    """(LHS, RHS) of the integration-by-parts identity for phi_xy = 1.

    Per smooth piece [u0,u1] x [v0,v1] of the weight, the right side is

        f(u0,v0)phi(u0,v0) + f(u1,v1)phi(u1,v1)
          - f(u0,v1)phi(u0,v1) - f(u1,v0)phi(u1,v0)
        + int [f_x(x,v0)phi(x,v0) - f_x(x,v1)phi(x,v1)] dx
        + int [f_y(u0,y)phi(u0,y) - f_y(u1,y)phi(u1,y)] dy
        + int int f_xy phi,

    summed over pieces (seam corner terms cancel where phi is continuous).
    All quadrature respects piece seams, so polynomial panels only ever
    see smooth integrands.  Requires analytic partials.
    """
    if not f.has_partials:
        raise ConfigurationError("parts_identity_residual needs analytic fx, fy, fxy")
    if w.rect != rect:
        raise ValueError("weight was built for a different rectangle")
    lhs, _ = oracle_integrate(f, rect, 1e-13)
    fv = as_grid_fn(f.f)
    fxv = as_grid_fn(f.fx)
    fyv = as_grid_fn(f.fy)
    fxyv = as_grid_fn(f.fxy)

    pieces = w.pieces()
    per_axis = max(1, int(round(len(pieces) ** 0.5)))
    panels = max(4, resolution // per_axis)
    rhs = 0.0
    for piece in pieces:
        xs, wx = panel_nodes(np.linspace(piece.xlo, piece.xhi, panels + 1), 8)
        ys, wy = panel_nodes(np.linspace(piece.ylo, piece.yhi, panels + 1), 8)
        cx = np.asarray([piece.xlo, piece.xhi, piece.xlo, piece.xhi])
        cy = np.asarray([piece.ylo, piece.yhi, piece.yhi, piece.ylo])
        signs = np.asarray([1.0, 1.0, -1.0, -1.0])
        quad = float(np.dot(signs, fv(cx, cy) * piece.eval(cx, cy)))
        bottom = float(wx @ (fxv(xs, piece.ylo) * piece.eval(xs, piece.ylo)))
        top = float(wx @ (fxv(xs, piece.yhi) * piece.eval(xs, piece.yhi)))
        left = float(wy @ (fyv(piece.xlo, ys) * piece.eval(piece.xlo, ys)))
        right = float(wy @ (fyv(piece.xhi, ys) * piece.eval(piece.xhi, ys)))
        cross = float(wx @ (fxyv(xs[:, None], ys[None, :]) * piece.eval(xs[:, None], ys[None, :])) @ wy)
        rhs += quad + (bottom - top) + (left - right) + cross
    return lhs, rhs


def parts_identity_residual(
    f: Integrand, w: WeightFunction, rect: Rectangle, resolution: int = 64
) -> float:
    """|LHS - RHS| of the integration-by-parts identity; see parts_identity_sides."""
    lhs, rhs = parts_identity_sides(f, w, rect, resolution)
    return abs(lhs - rhs)
