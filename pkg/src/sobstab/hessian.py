"""The second variation of each deficit at the constant optimizer.

At u = 1 the deficit's Hessian acts diagonally on the mean-zero modes;
the quadratic form per unit L^2 mass is

    circle   (2 pi k)^2 - S (q-2)          = (2 pi)^2 (k^2 - 1)
    sphere   l (l + d - 1) - d
    product  (d-2)(k^2 - 1) + l (l + d - 2)

so constants are the single negative direction and the kernel consists
of the degenerate modes (k = 1, degree-one harmonics, (k, l) = (1, 0))
that do not come from symmetries of the optimizer set.

The quartic budget collects the fourth-order coefficients of the deficit
along the kernel: the loss from the pure zero mode, the gain recovered
by the optimal degree-2 corrector, and the conversion of the net
coefficient into the sharp quotient constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import DimensionTooSmall, SobstabValidationError
from .geometry import CIRCLE, PRODUCT, SPHERE, Geometry, circle as circle_geometry, product_radius
from .spectral import harmonic_multiplicity

ZERO_EIGENVALUE_TOL = 1e-10


@dataclass(frozen=True)
class ModeEigenvalue:
    label: str
    raw: float
    normalized: float
    multiplicity: int = 1


@dataclass(frozen=True)
class HessianSpectrum:
    """Eigenvalues up to a cutoff, sorted ascending in raw value.

    ``counts`` is (negative, zero, positive) over the listed entries;
    zero means |raw| < 1e-10. Sphere (and product sphere-factor)
    degeneracies are reported through ``multiplicity`` metadata, not by
    repeating entries.
    """

    entries: Tuple[ModeEigenvalue, ...]
    counts: Tuple[int, int, int]
    kernel_modes: Tuple[str, ...]


def _classify(entries: Sequence[ModeEigenvalue]) -> HessianSpectrum:
    ordered = tuple(sorted(entries, key=lambda e: (e.raw, e.label)))
    neg = sum(1 for e in ordered if e.raw < -ZERO_EIGENVALUE_TOL)
    zero = sum(1 for e in ordered if abs(e.raw) < ZERO_EIGENVALUE_TOL)
    pos = len(ordered) - neg - zero
    kernel = tuple(e.label for e in ordered if abs(e.raw) < ZERO_EIGENVALUE_TOL)
    return HessianSpectrum(entries=ordered, counts=(neg, zero, pos), kernel_modes=kernel)


def linearized_eigenvalue(geometry: Geometry, mode) -> float:
    """Raw Hessian eigenvalue of one mode (k, l, or (k, l) per geometry)."""
    q = geometry.q
    if geometry.kind == CIRCLE:
        k = int(mode)
        return (2 * math.pi * k) ** 2 - geometry.mass * (q - 2)
    if geometry.kind == SPHERE:
        ell = int(mode)
        d = geometry.d
        return float(ell * (ell + d - 1) - d)
    k, ell = (int(m) for m in mode)
    d = geometry.d
    return float((d - 2) * (k ** 2 - 1) + ell * (ell + d - 2))


def _normalizer(geometry: Geometry, freq_sq: float) -> float:
    # denominator = frequency^2 + the quadratic form's own L^2 coefficient
    # (q-1) * mass, which keeps the ratio inside (-1, 1] for every mode
    return freq_sq + (geometry.q - 1) * geometry.mass


def spectrum(geometry: Geometry, cutoff: int) -> HessianSpectrum:
    """All modes with indices up to `cutoff`, classified and sorted."""
    if not 0 <= cutoff <= 64:
        raise SobstabValidationError(f"cutoff must be in 0..64, got {cutoff}")
    entries = []
    if geometry.kind == CIRCLE:
        for k in range(cutoff + 1):
            raw = linearized_eigenvalue(geometry, k)
            normalized = raw / _normalizer(geometry, (2 * math.pi * k) ** 2)
            if k == 0:
                entries.append(ModeEigenvalue("k=0", raw, normalized))
            else:
                entries.append(ModeEigenvalue(f"k={k} cos", raw, normalized))
                entries.append(ModeEigenvalue(f"k={k} sin", raw, normalized))
    elif geometry.kind == SPHERE:
        d = geometry.d
        for ell in range(cutoff + 1):
            raw = linearized_eigenvalue(geometry, ell)
            normalized = raw / _normalizer(geometry, ell * (ell + d - 1))
            entries.append(
                ModeEigenvalue(f"ell={ell}", raw, normalized, harmonic_multiplicity(d, ell))
            )
    else:
        d = geometry.d
        for k in range(cutoff + 1):
            for ell in range(cutoff + 1):
                raw = linearized_eigenvalue(geometry, (k, ell))
                freq_sq = (d - 2) * k ** 2 + ell * (ell + d - 2)
                normalized = raw / _normalizer(geometry, freq_sq)
                mult = harmonic_multiplicity(d - 1, ell)
                if k == 0:
                    entries.append(ModeEigenvalue(f"k=0 ell={ell}", raw, normalized, mult))
                else:
                    entries.append(ModeEigenvalue(f"k={k} cos ell={ell}", raw, normalized, mult))
                    entries.append(ModeEigenvalue(f"k={k} sin ell={ell}", raw, normalized, mult))
    return _classify(entries)


def product_radius_spectrum(d: int, r: float, cutoff: int) -> HessianSpectrum:
    """Spectrum on S^1(r) x S^{d-1}(1): kernel appears only at r = 1/sqrt(d-2)."""
    if d < 3:
        raise DimensionTooSmall(f"product spectrum needs d >= 3, got {d}")
    if not 0.0 < r <= 4.0:
        raise SobstabValidationError(f"radius must lie in (0, 4], got {r!r}")
    if not 0 <= cutoff <= 64:
        raise SobstabValidationError(f"cutoff must be in 0..64, got {cutoff}")
    q = 2 * d / (d - 2)
    mass = (d - 2) ** 2 / 4
    entries = []
    for k in range(cutoff + 1):
        for ell in range(cutoff + 1):
            freq_sq = (k / r) ** 2 + ell * (ell + d - 2)
            raw = freq_sq - (d - 2)
            normalized = raw / (freq_sq + (q - 1) * mass)
            mult = harmonic_multiplicity(d - 1, ell)
            if k == 0:
                entries.append(ModeEigenvalue(f"k=0 ell={ell}", raw, normalized, mult))
            else:
                entries.append(ModeEigenvalue(f"k={k} cos ell={ell}", raw, normalized, mult))
                entries.append(ModeEigenvalue(f"k={k} sin ell={ell}", raw, normalized, mult))
    return _classify(entries)


@dataclass(frozen=True)
class QuarticBudget:
    """Fourth-order coefficient budget of the deficit along the kernel.

    deficit(1 + mu g + ...) = mu^4 (loss - gain) + O(mu^5) with the
    optimal corrector; ``implied_sharp_constant`` is net converted into
    quotient units (it must reproduce the closed-form sharp constant).
    """

    loss: float
    gain: float
    net: float
    implied_sharp_constant: float


def quartic_budget(geometry: Geometry) -> QuarticBudget:
    """Loss, gain, net, and the implied sharp quotient constant."""
    q = geometry.q
    if geometry.kind == SPHERE:
        d = geometry.d
        area = geometry.volume
        loss = d * (q - 1) * (q + d) / (2 * (d + 1) ** 2 * (d + 3)) * area
        gain = d ** 3 * (q - 1) ** 2 / (2 * (d + 1) ** 2 * (d + 2) * (d + 3)) * area
        # mu^4 -> ||u - mean||^4 conversion times the norm normalization:
        # lambda^2 (d+1)^2 / ((q-1)^2 Y) with lambda^2 = |S^d|^{-2/q}
        conversion = (d + 1) ** 2 * (q - 2) / ((q - 1) ** 2 * d * area)
    else:
        # circle, and the product reduced to its circle factor by scaling
        s = (2 * math.pi) ** 2 / (q - 2)
        loss = s * (q + 1) * (q - 1) * (q - 2) / 32
        gain = s * (q - 1) ** 2 * (q - 2) / 96
        conversion = 4.0 / ((q - 1) ** 2 * s)
    net = loss - gain
    return QuarticBudget(
        loss=loss,
        gain=gain,
        net=net,
        implied_sharp_constant=net * conversion,
    )


def corrector_coefficient(geometry: Geometry) -> float:
    """Scalar on the degree-2 mode of the optimal corrector h.

    Circle and product: (q-1)/12 on cos of twice the kernel frequency;
    sphere: d(q-1)/(2(d+2)) on (x^2 - 1/(d+1)).
    """
    q = geometry.q
    if geometry.kind == SPHERE:
        d = geometry.d
        return d * (q - 1) / (2 * (d + 2))
    return (q - 1) / 12.0
