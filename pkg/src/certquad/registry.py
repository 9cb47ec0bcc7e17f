"""Built-in integrand corpus: smooth functions with analytic partials and
exact integrals.

Only kink-free integrands are shipped, since the certified bounds need
the derivative norms to exist.  ``exact`` maps a rectangle to the true
integral via antiderivatives, independent of any quadrature here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import DomainError, Integrand, Rectangle, RegistryError


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    description: str
    f: Callable
    fx: Callable
    fy: Callable
    fxy: Callable
    exact: Callable[[Rectangle], float]
    domain_ok: Callable[[Rectangle], bool] = lambda rect: True

    def integrand(self, rect: Rectangle | None = None) -> Integrand:
        """Bind to a rectangle, filling the exact integral for it."""
        if rect is not None and not self.domain_ok(rect):
            raise DomainError(f"integrand {self.name!r} is not defined on {rect}")
        exact = float(self.exact(rect)) if rect is not None else None
        return Integrand(
            f=self.f, fx=self.fx, fy=self.fy, fxy=self.fxy,
            exact_integral=exact, label=self.name,
        )


def _zero(x, y):
    return 0.0 * np.asarray(x, dtype=float) + 0.0 * np.asarray(y, dtype=float)


def _one(x, y):
    return 1.0 + _zero(x, y)


_ENTRIES = (
    RegistryEntry(
        "one", "constant 1",
        f=_one, fx=_zero, fy=_zero, fxy=_zero,
        exact=lambda r: r.width * r.height,
    ),
    RegistryEntry(
        "x", "f(x, y) = x",
        f=lambda x, y: np.asarray(x, dtype=float) + _zero(x, y),
        fx=_one, fy=_zero, fxy=_zero,
        exact=lambda r: 0.5 * (r.b**2 - r.a**2) * r.height,
    ),
    RegistryEntry(
        "y", "f(x, y) = y",
        f=lambda x, y: np.asarray(y, dtype=float) + _zero(x, y),
        fx=_zero, fy=_one, fxy=_zero,
        exact=lambda r: 0.5 * (r.d**2 - r.c**2) * r.width,
    ),
    RegistryEntry(
        "xy", "bilinear x*y",
        f=lambda x, y: np.asarray(x, dtype=float) * np.asarray(y, dtype=float),
        fx=lambda x, y: np.asarray(y, dtype=float) + _zero(x, y),
        fy=lambda x, y: np.asarray(x, dtype=float) + _zero(x, y),
        fxy=_one,
        exact=lambda r: 0.25 * (r.b**2 - r.a**2) * (r.d**2 - r.c**2),
    ),
    RegistryEntry(
        "poly22", "x^2 * y^2",
        f=lambda x, y: np.asarray(x, dtype=float) ** 2 * np.asarray(y, dtype=float) ** 2,
        fx=lambda x, y: 2.0 * np.asarray(x, dtype=float) * np.asarray(y, dtype=float) ** 2,
        fy=lambda x, y: 2.0 * np.asarray(x, dtype=float) ** 2 * np.asarray(y, dtype=float),
        fxy=lambda x, y: 4.0 * np.asarray(x, dtype=float) * np.asarray(y, dtype=float),
        exact=lambda r: (r.b**3 - r.a**3) * (r.d**3 - r.c**3) / 9.0,
    ),
    RegistryEntry(
        "cubes", "x^3 + y^3 (zero mixed partial)",
        f=lambda x, y: np.asarray(x, dtype=float) ** 3 + np.asarray(y, dtype=float) ** 3,
        fx=lambda x, y: 3.0 * np.asarray(x, dtype=float) ** 2 + _zero(x, y),
        fy=lambda x, y: 3.0 * np.asarray(y, dtype=float) ** 2 + _zero(x, y),
        fxy=_zero,
        exact=lambda r: 0.25 * (r.b**4 - r.a**4) * r.height + 0.25 * (r.d**4 - r.c**4) * r.width,
    ),
    RegistryEntry(
        "sinsin", "sin(x) * sin(y)",
        f=lambda x, y: np.sin(x) * np.sin(y),
        fx=lambda x, y: np.cos(x) * np.sin(y),
        fy=lambda x, y: np.sin(x) * np.cos(y),
        fxy=lambda x, y: np.cos(x) * np.cos(y),
        exact=lambda r: (math.cos(r.a) - math.cos(r.b)) * (math.cos(r.c) - math.cos(r.d)),
    ),
    RegistryEntry(
        "expsum", "exp(x + y)",
        f=lambda x, y: np.exp(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fx=lambda x, y: np.exp(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fy=lambda x, y: np.exp(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fxy=lambda x, y: np.exp(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        exact=lambda r: (math.exp(r.b) - math.exp(r.a)) * (math.exp(r.d) - math.exp(r.c)),
    ),
    RegistryEntry(
        "invsum", "1 / (1 + x + y), needs 1 + a + c > 0",
        f=lambda x, y: 1.0 / (1.0 + np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fx=lambda x, y: -1.0 / (1.0 + np.asarray(x, dtype=float) + np.asarray(y, dtype=float)) ** 2,
        fy=lambda x, y: -1.0 / (1.0 + np.asarray(x, dtype=float) + np.asarray(y, dtype=float)) ** 2,
        fxy=lambda x, y: 2.0 / (1.0 + np.asarray(x, dtype=float) + np.asarray(y, dtype=float)) ** 3,
        exact=lambda r: _invsum_exact(r),
        domain_ok=lambda r: 1.0 + r.a + r.c > 1e-9,
    ),
    RegistryEntry(
        "sinsum", "sin(x + y)",
        f=lambda x, y: np.sin(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fx=lambda x, y: np.cos(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fy=lambda x, y: np.cos(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        fxy=lambda x, y: -np.sin(np.asarray(x, dtype=float) + np.asarray(y, dtype=float)),
        exact=lambda r: _corner_difference(lambda x, y: -math.sin(x + y), r),
    ),
)


def _corner_difference(antiderivative, r: Rectangle) -> float:
    return (
        antiderivative(r.b, r.d)
        - antiderivative(r.a, r.d)
        - antiderivative(r.b, r.c)
        + antiderivative(r.a, r.c)
    )


def _invsum_exact(r: Rectangle) -> float:
    def anti(x, y):
        s = 1.0 + x + y
        return s * math.log(s) - s

    return _corner_difference(anti, r)


REGISTRY: dict[str, RegistryEntry] = {e.name: e for e in _ENTRIES}


def names() -> tuple[str, ...]:
    return tuple(REGISTRY)


def get_entry(name: str) -> RegistryEntry:
    try:
        return REGISTRY[name]
    except KeyError:
        raise RegistryError(
            f"unknown integrand {name!r}; available: {', '.join(names())}"
        ) from None
