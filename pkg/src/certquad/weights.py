"""Weight functions with unit mixed partial, and their L^q norms.

Every rule in this package comes from a choice of phi with phi_xy = 1.
The built-in variants are all piecewise products of two linear ramps:

- corner-product weight (trapezoid rule): phi = (x - m1)(y - m2);
- boundary-vanishing weight (midpoint rule): phi = omega1(x) * omega2(y)
  where omega1 = x - a left of m1 and x - b right of it, and similarly
  omega2, so phi = 0 on the whole boundary;
- their composite analogues on a uniform m x n partition: sawtooth ramps
  per cell, centered on the cell (trapezoid) or split at the cell
  midpoint and vanishing at cell edges (midpoint).

``CustomPhi`` covers the general solution phi = xy + alpha(x) + beta(y).

Closed-form L^q norms follow from the one-dimensional ramp integral

    || ramp ||_q = (2 m / (q+1))^(1/q) * (delta/2)^(1 + 1/q),

with delta the cell width and m the cell count (max |ramp| = delta/2 at
q = infinity); the two-dimensional norms are products of these because
each variant separates.  ``phi_norm_numeric`` recomputes the same norms
by piecewise quadrature that never straddles a piece seam, providing an
independent audit of the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import logsumexp

from .core import (
    DomainError,
    Exponent,
    PartitionSpec,
    Rectangle,
    UnsupportedVariantError,
)
from .gauss import as_vector_fn, graded_breaks, merge_breaks, panel_nodes, refine_breaks


@dataclass(frozen=True)
class PhiPiece:
    """One smooth piece of a weight function.

    Built-in pieces evaluate as ``(x - x_root)(y - y_root)``; a custom
    piece carries its own evaluator.  ``eval`` accepts points on the
    closure of the piece, which makes seam values unambiguous per piece.
    """

    xlo: float
    xhi: float
    ylo: float
    yhi: float
    x_root: float | None = None
    y_root: float | None = None
    fn: Callable | None = None

    def eval(self, x, y):
        if self.x_root is not None:
            return (np.asarray(x, dtype=float) - self.x_root) * (
                np.asarray(y, dtype=float) - self.y_root
            )
        return self.fn(x, y)


class WeightFunction:
    """Base class; concrete variants populate rect and the piece layout."""

    variant: str = "abstract"
    rect: Rectangle

    def pieces(self) -> tuple[PhiPiece, ...]:
        raise NotImplementedError

    def value_at(self, x: float, y: float) -> float:
        raise NotImplementedError

    def __call__(self, x: float, y: float) -> float:
        return eval_phi(self, x, y)


class _SeparableWeight(WeightFunction):
    """Piecewise product (x - x_root_i)(y - y_root_j) on a tensor piece grid.

    ``x_breaks`` has one more entry than ``x_roots``; interval i is
    [x_breaks[i], x_breaks[i+1]] with root x_roots[i].  Lookup uses the
    limit-from-above convention: a point on an interior seam belongs to
    the piece on its larger-coordinate side.
    """

    def __init__(self, rect, x_breaks, y_breaks, x_roots, y_roots, x_cells, y_cells):
        self.rect = rect
        self.x_breaks = np.asarray(x_breaks, dtype=float)
        self.y_breaks = np.asarray(y_breaks, dtype=float)
        self.x_roots = np.asarray(x_roots, dtype=float)
        self.y_roots = np.asarray(y_roots, dtype=float)
        self.x_cells = x_cells
        self.y_cells = y_cells

    def _index(self, breaks: np.ndarray, t: float) -> int:
        i = int(np.searchsorted(breaks, t, side="right")) - 1
        return min(max(i, 0), breaks.size - 2)

    def value_at(self, x: float, y: float) -> float:
        i = self._index(self.x_breaks, x)
        j = self._index(self.y_breaks, y)
        return (x - self.x_roots[i]) * (y - self.y_roots[j])

    def pieces(self) -> tuple[PhiPiece, ...]:
        out = []
        for i in range(self.x_roots.size):
            for j in range(self.y_roots.size):
                out.append(
                    PhiPiece(
                        xlo=float(self.x_breaks[i]),
                        xhi=float(self.x_breaks[i + 1]),
                        ylo=float(self.y_breaks[j]),
                        yhi=float(self.y_breaks[j + 1]),
                        x_root=float(self.x_roots[i]),
                        y_root=float(self.y_roots[j]),
                    )
                )
        return tuple(out)


class TrapezoidPhi(_SeparableWeight):
    """phi(x, y) = (x - m1)(y - m2); vanishes on the two midlines."""

    variant = "trapezoid-phi"

    def __init__(self, rect: Rectangle):
        super().__init__(
            rect,
            x_breaks=(rect.a, rect.m1, rect.b),
            y_breaks=(rect.c, rect.m2, rect.d),
            x_roots=(rect.m1, rect.m1),
            y_roots=(rect.m2, rect.m2),
            x_cells=1,
            y_cells=1,
        )


class MidpointPhi(_SeparableWeight):
    """Four-piece product vanishing on the rectangle boundary.

    The ramp in x is x - a left of the midline and x - b right of it
    (value at the midline itself is taken from the right piece).
    """

    variant = "midpoint-phi"

    def __init__(self, rect: Rectangle):
        super().__init__(
            rect,
            x_breaks=(rect.a, rect.m1, rect.b),
            y_breaks=(rect.c, rect.m2, rect.d),
            x_roots=(rect.a, rect.b),
            y_roots=(rect.c, rect.d),
            x_cells=1,
            y_cells=1,
        )


def _interleave(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty(a.size + b.size)
    out[0::2] = a
    out[1::2] = b
    return out


class CompositeTrapezoidPhi(_SeparableWeight):
    """Sawtooth product U_i(x) V_j(y): per-cell ramps centered on the cell."""

    variant = "composite-trapezoid-phi"

    def __init__(self, rect: Rectangle, partition: PartitionSpec):
        if partition.rect != rect:
            raise ValueError("partition was built for a different rectangle")
        xs, ys = partition.x_nodes(), partition.y_nodes()
        xm, ym = partition.x_mids(), partition.y_mids()
        super().__init__(
            rect,
            x_breaks=_interleave(xs[:-1], xm).tolist() + [rect.b],
            y_breaks=_interleave(ys[:-1], ym).tolist() + [rect.d],
            x_roots=np.repeat(xm, 2),
            y_roots=np.repeat(ym, 2),
            x_cells=partition.m,
            y_cells=partition.n,
        )
        self.partition = partition


class CompositeMidpointPhi(_SeparableWeight):
    """Sawtooth product of per-cell ramps vanishing at the cell edges."""

    variant = "composite-midpoint-phi"

    def __init__(self, rect: Rectangle, partition: PartitionSpec):
        if partition.rect != rect:
            raise ValueError("partition was built for a different rectangle")
        xs, ys = partition.x_nodes(), partition.y_nodes()
        xm, ym = partition.x_mids(), partition.y_mids()
        super().__init__(
            rect,
            x_breaks=_interleave(xs[:-1], xm).tolist() + [rect.b],
            y_breaks=_interleave(ys[:-1], ym).tolist() + [rect.d],
            x_roots=_interleave(xs[:-1], xs[1:]),
            y_roots=_interleave(ys[:-1], ys[1:]),
            x_cells=partition.m,
            y_cells=partition.n,
        )
        self.partition = partition


class CustomPhi(WeightFunction):
    """phi(x, y) = xy + alpha(x) + beta(y) for user-supplied alpha, beta.

    alpha and beta are asserted absolutely continuous by the caller; no
    symbolic derivative is carried, so operations needing phi-derivatives
    are restricted to the built-in variants.
    """

    variant = "custom-phi"

    def __init__(self, alpha: Callable, beta: Callable, rect: Rectangle):
        self.rect = rect
        self.alpha = alpha
        self.beta = beta
        self._alpha_v = as_vector_fn(alpha)
        self._beta_v = as_vector_fn(beta)

    def value_at(self, x: float, y: float) -> float:
        return x * y + float(self._alpha_v(np.asarray([x]))[0]) + float(
            self._beta_v(np.asarray([y]))[0]
        )

    def eval_grid(self, x, y) -> np.ndarray:
        """Vectorized evaluation with broadcasting."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return x * y + self._alpha_v(x) + self._beta_v(y)

    def pieces(self) -> tuple[PhiPiece, ...]:
        r = self.rect
        return (PhiPiece(r.a, r.b, r.c, r.d, fn=self.eval_grid),)


BUILTIN_VARIANTS = (TrapezoidPhi, MidpointPhi, CompositeTrapezoidPhi, CompositeMidpointPhi)


def eval_phi(w: WeightFunction, x: float, y: float) -> float:
    """Value of phi at (x, y); on a seam, the piece with larger coordinates.

    Raises DomainError for points outside the rectangle.
    """
    if not w.rect.contains(x, y):
        raise DomainError(f"point ({x}, {y}) outside rectangle {w.rect}")
    return float(w.value_at(float(x), float(y)))


def ramp_norm_closed(length: float, cells: int, q) -> float:
    """L^q norm of an m-cell sawtooth ramp of total span ``length``.

    The ramp rises linearly from 0 to delta/2 = length/(2 cells) twice per
    cell, so ||ramp||_q^q = 2 cells * int_0^(delta/2) t^q dt.
    """
    q = Exponent.coerce(q)
    delta = length / cells
    if q.is_infinite:
        return delta / 2.0
    qq = q.value
    return (2.0 * cells / (qq + 1.0)) ** (1.0 / qq) * (delta / 2.0) ** (1.0 + 1.0 / qq)


def _cells_of(w: WeightFunction) -> tuple[int, int]:
    if not isinstance(w, _SeparableWeight):
        raise UnsupportedVariantError(
            f"closed-form norms are unavailable for {w.variant}; use phi_norm_numeric"
        )
    return w.x_cells, w.y_cells


def phi_norm_closed(w: WeightFunction, q) -> float:
    """Exact L^q norm of a built-in weight over its rectangle.

    All built-in variants separate into per-axis ramps, so the norm is the
    product of the two one-dimensional ramp norms.
    """
    q = Exponent.coerce(q)
    mx, my = _cells_of(w)
    return ramp_norm_closed(w.rect.width, mx, q) * ramp_norm_closed(w.rect.height, my, q)


_EDGES = ("bottom", "top", "left", "right")


def phi_edge_norm_closed(w: WeightFunction, q, edge: str) -> float:
    """Exact L^q norm of a built-in weight restricted to one boundary edge.

    On an edge the transverse ramp is frozen at its boundary value, e.g.
    ||phi(., c)||_q = |c - y_root| * ||x-ramp||_q; the boundary-vanishing
    variants give 0.
    """
    q = Exponent.coerce(q)
    if edge not in _EDGES:
        raise ValueError(f"edge must be one of {_EDGES}")
    mx, my = _cells_of(w)
    if edge in ("bottom", "top"):
        fixed = w.rect.c if edge == "bottom" else w.rect.d
        root = w.y_roots[0] if edge == "bottom" else w.y_roots[-1]
        return abs(fixed - root) * ramp_norm_closed(w.rect.width, mx, q)
    fixed = w.rect.a if edge == "left" else w.rect.b
    root = w.x_roots[0] if edge == "left" else w.x_roots[-1]
    return abs(fixed - root) * ramp_norm_closed(w.rect.height, my, q)


def _axis_power_integral(breaks: np.ndarray, roots: np.ndarray, qq: float, resolution: int) -> float:
    """sum_k int over interval k of |t - root_k|^q dt by graded panel quadrature."""
    total = 0.0
    max_frac = 1.0 / max(2, resolution // 64)
    for k in range(roots.size):
        lo, hi = float(breaks[k]), float(breaks[k + 1])
        panels = refine_breaks(graded_breaks(lo, hi, levels=12), (hi - lo) * max_frac)
        x, wts = panel_nodes(panels, 8)
        total += float(np.dot(wts, np.abs(x - roots[k]) ** qq))
    return total


def _axis_log_power_integral(breaks, roots, qq, resolution):
    max_frac = 1.0 / max(2, resolution // 64)
    logs = []
    for k in range(roots.size):
        lo, hi = float(breaks[k]), float(breaks[k + 1])
        panels = refine_breaks(graded_breaks(lo, hi, levels=12), (hi - lo) * max_frac)
        x, wts = panel_nodes(panels, 8)
        u = np.abs(x - roots[k])
        mask = (u > 0.0) & (wts > 0.0)
        if mask.any():
            logs.append(qq * np.log(u[mask]) + np.log(wts[mask]))
    if not logs:
        return -np.inf
    return float(logsumexp(np.concatenate(logs)))


def _axis_sup(breaks: np.ndarray, roots: np.ndarray) -> float:
    """max over interval closures of |t - root_k|; extremes sit at interval ends."""
    lo_vals = np.abs(breaks[:-1] - roots)
    hi_vals = np.abs(breaks[1:] - roots)
    return float(max(lo_vals.max(), hi_vals.max()))


def _scan_zero_breaks(fn, lo: float, hi: float, samples: int = 129) -> list[float]:
    """Sign-change locations of fn on [lo, hi], refined by bisection."""
    xs = np.linspace(lo, hi, samples)
    vals = fn(xs)
    zeros: list[float] = []
    exact = np.flatnonzero(vals == 0.0)
    # A line of identical zeros means the scan line is degenerate; skip it.
    if exact.size > samples // 2:
        return []
    zeros.extend(float(xs[i]) for i in exact if lo < xs[i] < hi)
    for i in np.flatnonzero(vals[:-1] * vals[1:] < 0.0):
        a, b = float(xs[i]), float(xs[i + 1])
        fa = float(vals[i])
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = float(fn(np.asarray([m]))[0])
            if fm == 0.0:
                a = b = m
                break
            if (fa < 0.0) == (fm < 0.0):
                a, fa = m, fm
            else:
                b = m
        zeros.append(0.5 * (a + b))
        if len(zeros) >= 16:
            break
    return zeros


def _custom_axis_nodes(w: CustomPhi, axis: str, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    r = w.rect
    if axis == "x":
        lo, hi, mid_t = r.a, r.b, r.m2
        span_t = r.height
        line = lambda off: as_vector_fn(lambda xs: w.eval_grid(xs, mid_t + off * span_t))
    else:
        lo, hi, mid_t = r.c, r.d, r.m1
        span_t = r.width
        line = lambda off: as_vector_fn(lambda ys: w.eval_grid(mid_t + off * span_t, ys))
    zeros: list[float] = []
    for off in (0.155, -0.237):
        zeros.extend(_scan_zero_breaks(line(off), lo, hi))
    breaks = merge_breaks([lo, hi], zeros)
    pieces = []
    max_frac = 1.0 / max(2, resolution // 64)
    for blo, bhi in zip(breaks[:-1], breaks[1:]):
        pieces.append(refine_breaks(graded_breaks(blo, bhi, levels=10), (hi - lo) * max_frac))
    allbreaks = merge_breaks(*pieces)
    return panel_nodes(allbreaks, 8)


def _custom_norm_numeric(w: CustomPhi, q: Exponent, resolution: int) -> float:
    r = w.rect
    if q.is_infinite:
        best = 0.0
        nx = max(64, resolution)
        xs = np.linspace(r.a, r.b, nx + 1)
        ys = np.linspace(r.c, r.d, nx + 1)
        for _ in range(3):
            vals = np.abs(w.eval_grid(xs[:, None], ys[None, :]))
            i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
            best = max(best, float(vals[i, j]))
            xs = np.linspace(xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)], 33)
            ys = np.linspace(ys[max(j - 1, 0)], ys[min(j + 1, ys.size - 1)], 33)
        return best
    xs, wx = _custom_axis_nodes(w, "x", resolution)
    ys, wy = _custom_axis_nodes(w, "y", resolution)
    vals = np.abs(w.eval_grid(xs[:, None], ys[None, :])) ** q.value
    return float(wx @ vals @ wy) ** (1.0 / q.value)


def phi_norm_numeric(w: WeightFunction, q, resolution: int = 256) -> float:
    """L^q norm of a weight by piecewise-aware quadrature.

    Panels never straddle a piece seam.  Built-in variants separate, so
    the tensor-product quadrature is accumulated per axis; q = infinity
    takes the maximum of |phi| over piece closures (attained at piece
    corners for these piecewise-bilinear weights).
    """
    q = Exponent.coerce(q)
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    if isinstance(w, CustomPhi):
        return _custom_norm_numeric(w, q, resolution)
    if not isinstance(w, _SeparableWeight):
        raise UnsupportedVariantError(f"unknown weight variant {w.variant}")
    if q.is_infinite:
        return _axis_sup(w.x_breaks, w.x_roots) * _axis_sup(w.y_breaks, w.y_roots)
    qq = q.value
    if qq > 64.0:
        lx = _axis_log_power_integral(w.x_breaks, w.x_roots, qq, resolution)
        ly = _axis_log_power_integral(w.y_breaks, w.y_roots, qq, resolution)
        return float(np.exp((lx + ly) / qq))
    ix = _axis_power_integral(w.x_breaks, w.x_roots, qq, resolution)
    iy = _axis_power_integral(w.y_breaks, w.y_roots, qq, resolution)
    return (ix * iy) ** (1.0 / qq)
