"""Manifold descriptors with every derived constant of the three inequalities.

kind      inequality                                        sharp factor
--------  ------------------------------------------------  --------------------------
circle    int (u')^2 + S u^2 >= S (int |u|^q)^{2/q}          S = (2 pi)^2 / (q - 2)
sphere    int |grad u|^2 + d/(q-2) u^2 >= Y (int |u|^q)^{2/q}  Y = d/(q-2) |S^d|^{1-2/q}
product   E[u] >= Y (int |u|^q)^{2/q} on S^1(1/sqrt(d-2)) x S^{d-1}, q = 2d/(d-2),
          Y = ((d-2)^2/4) Vol^{2/d},  Vol = (2 pi / sqrt(d-2)) |S^{d-1}|

``mass`` is the zeroth-order coefficient of the quadratic form defining
the norm: S, d/(q-2) and (d-2)^2/4 respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    DimensionTooSmall,
    SobstabValidationError,
    SubcriticalExponent,
    SupercriticalExponent,
)
from .spectral import MAX_SPHERE_DIM, sphere_area

CIRCLE = "circle"
SPHERE = "sphere"
PRODUCT = "product"

_KINDS = (CIRCLE, SPHERE, PRODUCT)

# |u|^q amplifies grid error like q; past this the quadrature contract
# is no longer certified.
MAX_EXPONENT = 64.0


@dataclass(frozen=True)
class Geometry:
    """Validated descriptor; construct through make_geometry or the factories."""

    kind: str
    q: float
    d: Optional[int]
    mass: float
    sharp_factor: float
    volume: float
    radius: Optional[float] = None

    @property
    def S(self) -> float:
        if self.kind != CIRCLE:
            raise SobstabValidationError("S is the circle constant; use sharp_factor or Y")
        return self.sharp_factor

    @property
    def Y(self) -> float:
        if self.kind == CIRCLE:
            raise SobstabValidationError("the circle inequality has no Yamabe constant Y")
        return self.sharp_factor

    def __str__(self) -> str:
        if self.kind == CIRCLE:
            return f"circle(q={self.q:g})"
        if self.kind == SPHERE:
            return f"sphere(d={self.d}, q={self.q:g})"
        return f"product(d={self.d}, q={self.q:g})"


def _validate_exponent(q) -> float:
    q = float(q)
    if not math.isfinite(q) or q <= 2.0:
        raise SubcriticalExponent(f"exponent must satisfy q > 2, got {q!r}")
    if q > MAX_EXPONENT:
        raise SobstabValidationError(f"exponent capped at {MAX_EXPONENT:g} for certified quadrature")
    return q


def circle(q: float) -> Geometry:
    """The periodic inequality on R/Z with S = (2 pi)^2 / (q - 2)."""
    q = _validate_exponent(q)
    s = (2 * math.pi) ** 2 / (q - 2)
    return Geometry(kind=CIRCLE, q=q, d=None, mass=s, sharp_factor=s, volume=1.0)


def sphere(d: int, q: float) -> Geometry:
    """The subcritical inequality on S^d, 2 < q < 2d/(d-2) (q > 2 only for d = 2)."""
    d = int(d)
    if d < 2:
        raise DimensionTooSmall(f"sphere geometry needs d >= 2, got {d}")
    if d > MAX_SPHERE_DIM:
        raise SobstabValidationError(f"sphere dimension capped at {MAX_SPHERE_DIM}, got {d}")
    q = _validate_exponent(q)
    if d >= 3 and q >= 2 * d / (d - 2):
        raise SupercriticalExponent(
            f"sphere exponent must satisfy q < 2d/(d-2) = {2 * d / (d - 2):g}, got {q:g}"
        )
    area = sphere_area(d)
    mass = d / (q - 2)
    y = mass * area ** (1 - 2 / q)
    return Geometry(kind=SPHERE, q=q, d=d, mass=mass, sharp_factor=y, volume=area)


def product(d: int) -> Geometry:
    """The conformal inequality on S^1(1/sqrt(d-2)) x S^{d-1}(1); q = 2d/(d-2)."""
    d = int(d)
    if d < 3:
        raise DimensionTooSmall(f"product geometry needs d >= 3, got {d}")
    if d > MAX_SPHERE_DIM:
        raise SobstabValidationError(f"product dimension capped at {MAX_SPHERE_DIM}, got {d}")
    q = 2 * d / (d - 2)
    r = product_radius(d)
    vol = 2 * math.pi * r * sphere_area(d - 1)
    mass = (d - 2) ** 2 / 4
    y = mass * vol ** (2 / d)
    return Geometry(kind=PRODUCT, q=q, d=d, mass=mass, sharp_factor=y, volume=vol, radius=r)


def make_geometry(kind: str, q: Optional[float] = None, d: Optional[int] = None) -> Geometry:
    """Build a validated descriptor. For the product, q is fixed to 2d/(d-2)."""
    if kind not in _KINDS:
        raise SobstabValidationError(f"unknown geometry kind {kind!r}; expected one of {_KINDS}")
    if kind == CIRCLE:
        if q is None:
            raise SobstabValidationError("circle geometry requires q")
        return circle(q)
    if kind == SPHERE:
        if q is None or d is None:
            raise SobstabValidationError("sphere geometry requires both d and q")
        return sphere(d, q)
    if d is None:
        raise SobstabValidationError("product geometry requires d")
    return product(d)


def product_radius(d: int) -> float:
    """Radius 1/sqrt(d-2) of the circle factor that makes constants degenerate."""
    if d < 3:
        raise DimensionTooSmall(f"product radius needs d >= 3, got {d}")
    return 1.0 / math.sqrt(d - 2)
