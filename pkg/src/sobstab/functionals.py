"""Trial functions and the two sides of each inequality.

A trial function is a finite real coefficient vector in its geometry's
orthogonal basis: Fourier modes on the circle, orthonormal zonal
harmonics on the sphere, and Fourier x zonal tensor modes on the
product. Squared norms are exact Parseval sums of the coefficients; only
the L^q term needs quadrature, which refines itself by grid doubling
until the value is certified to REL_TOL.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import kernels
from .errors import DegenerateDistance, QuadratureNotConverged, SobstabValidationError
from .geometry import CIRCLE, PRODUCT, SPHERE, Geometry
from .spectral import next_power_of_two, sphere_area, gauss_jacobi, zonal_table

MAX_MODES = 64
REL_TOL = 1e-11
CIRCLE_GRID_CAP = 2 ** 16
SPHERE_GRID_CAP = 4096
PRODUCT_S_GRID_CAP = 8192
PRODUCT_X_GRID_CAP = 1024

# below this fraction of normSq the distance (and hence the quotient) is
# numerically meaningless in double precision
DISTANCE_FLOOR = 1e-14

_EPS = float(np.finfo(float).eps)


def _coeff_array(values, shape_name: str, ndim: int = 1) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise SobstabValidationError(f"{shape_name} must be {ndim}-dimensional")
    if arr.size and not np.all(np.isfinite(arr)):
        raise SobstabValidationError(f"{shape_name} must be finite")
    arr.setflags(write=False)
    return arr


def _converged(current: float, previous: float, rel_tol: float) -> bool:
    return abs(current - previous) <= rel_tol * max(abs(current), 1e-300)


@dataclass(frozen=True)
class CircleFunction:
    """u(t) = a0 + sum_{k=1}^{K} (a_k cos 2 pi k t + b_k sin 2 pi k t) on R/Z."""

    geometry: Geometry
    a0: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    @property
    def max_mode(self) -> int:
        return self.cos_coeffs.shape[0]

    def _mode_energies(self) -> np.ndarray:
        k = np.arange(1, self.max_mode + 1)
        weight = (2 * np.pi * k) ** 2 + self.geometry.mass
        return 0.5 * weight * (self.cos_coeffs ** 2 + self.sin_coeffs ** 2)

    def constant_energy(self) -> float:
        return self.geometry.mass * self.a0 ** 2

    def fluctuation_norm_sq(self) -> float:
        return float(np.sum(self._mode_energies()))

    def norm_sq(self) -> float:
        return self.constant_energy() + self.fluctuation_norm_sq()

    def mean(self) -> float:
        return self.a0

    def drop_mean(self) -> "CircleFunction":
        return replace(self, a0=0.0)

    def plus_constant(self, value: float) -> "CircleFunction":
        return replace(self, a0=self.a0 + value)

    def scale(self, c: float) -> "CircleFunction":
        return replace(
            self,
            a0=c * self.a0,
            cos_coeffs=_coeff_array(c * self.cos_coeffs, "cos coefficients"),
            sin_coeffs=_coeff_array(c * self.sin_coeffs, "sin coefficients"),
        )

    def sample(self, n: int) -> np.ndarray:
        """Values on the uniform grid t_j = j/n (n a power of two >= 4K+4)."""
        from .spectral import circle_synthesis

        return circle_synthesis(self.a0, self.cos_coeffs, self.sin_coeffs, n)

    def _grid_value(self, n: int) -> float:
        costab, sintab = kernels.phase_tables(n)
        vals = kernels.circle_synth(self.a0, self.cos_coeffs, self.sin_coeffs, costab, sintab)
        return kernels.uniform_power_mean(vals, self.geometry.q)

    def lq_integral(self, rel_tol: float = REL_TOL, max_points: Optional[int] = None):
        """(integral of |u|^q over [0, 1], estimated absolute error)."""
        cap = max_points or CIRCLE_GRID_CAP
        n = next_power_of_two(max(256, 16 * self.max_mode))
        value = self._grid_value(n)
        prev = None
        while True:
            if 2 * n > cap:
                raise QuadratureNotConverged(
                    f"circle L^q grid hit cap {cap} before reaching rel_tol={rel_tol:g}",
                    last=value,
                    previous=prev,
                )
            n *= 2
            prev, value = value, self._grid_value(n)
            if _converged(value, prev, rel_tol):
                return value, abs(value - prev)


@dataclass(frozen=True)
class SphereFunction:
    """u(omega) = sum_l c_l Y_l(omega_{d+1}), zonal on S^d."""

    geometry: Geometry
    zonal_coeffs: np.ndarray

    @property
    def max_degree(self) -> int:
        return self.zonal_coeffs.shape[0] - 1

    def _mode_energies(self) -> np.ndarray:
        d = self.geometry.d
        ell = np.arange(1, self.max_degree + 1)
        weight = ell * (ell + d - 1) + self.geometry.mass
        return weight * self.zonal_coeffs[1:] ** 2

    def constant_energy(self) -> float:
        return self.geometry.mass * self.zonal_coeffs[0] ** 2

    def fluctuation_norm_sq(self) -> float:
        return float(np.sum(self._mode_energies()))

    def norm_sq(self) -> float:
        return self.constant_energy() + self.fluctuation_norm_sq()

    def mean(self) -> float:
        return self.zonal_coeffs[0] / math.sqrt(self.geometry.volume)

    def drop_mean(self) -> "SphereFunction":
        coeffs = np.array(self.zonal_coeffs)
        coeffs[0] = 0.0
        return replace(self, zonal_coeffs=_coeff_array(coeffs, "zonal coefficients"))

    def plus_constant(self, value: float) -> "SphereFunction":
        coeffs = np.array(self.zonal_coeffs)
        coeffs[0] += value * math.sqrt(self.geometry.volume)
        return replace(self, zonal_coeffs=_coeff_array(coeffs, "zonal coefficients"))

    def scale(self, c: float) -> "SphereFunction":
        return replace(self, zonal_coeffs=_coeff_array(c * self.zonal_coeffs, "zonal coefficients"))

    def sample(self, x) -> np.ndarray:
        """Values at latitudes x in [-1, 1]."""
        from .spectral import zonal_basis

        table = zonal_basis(self.geometry.d, self.max_degree).table(np.asarray(x, dtype=float))
        return table.T @ self.zonal_coeffs

    def _rule_value(self, n: int) -> float:
        d = self.geometry.d
        beta = (d - 2) / 2
        rule = gauss_jacobi(n, beta)
        table = zonal_table(d, self.max_degree, n, beta)
        vals = kernels.zonal_synth(self.zonal_coeffs, table)
        return sphere_area(d - 1) * kernels.weighted_power_sum(vals, rule.weights, self.geometry.q)

    def lq_integral(self, rel_tol: float = REL_TOL, max_points: Optional[int] = None):
        """(integral of |u|^q over S^d, estimated absolute error)."""
        cap = max_points or SPHERE_GRID_CAP
        n = max(64, 4 * (self.max_degree + 1))
        value = self._rule_value(n)
        prev = None
        while True:
            if 2 * n > cap:
                raise QuadratureNotConverged(
                    f"sphere L^q rule hit cap {cap} before reaching rel_tol={rel_tol:g}",
                    last=value,
                    previous=prev,
                )
            n *= 2
            prev, value = value, self._rule_value(n)
            if _converged(value, prev, rel_tol):
                return value, abs(value - prev)


@dataclass(frozen=True)
class ProductFunction:
    """u(s, omega) = sum_{k,l} (A_{kl} cos(k s / r) + B_{kl} sin(k s / r)) Z_l(omega_d).

    Z_l are the orthonormal zonal harmonics on the S^{d-1} factor; r is
    the circle radius 1/sqrt(d-2). Both coefficient blocks have shape
    (K+1, L+1); row 0 of the sine block must vanish.
    """

    geometry: Geometry
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    @property
    def max_mode(self) -> int:
        return self.cos_coeffs.shape[0] - 1

    @property
    def max_degree(self) -> int:
        return self.cos_coeffs.shape[1] - 1

    def _eigen_grid(self) -> np.ndarray:
        d = self.geometry.d
        k = np.arange(self.max_mode + 1)[:, None]
        ell = np.arange(self.max_degree + 1)[None, :]
        return (d - 2) * k ** 2 + ell * (ell + d - 2)

    def _mode_energies(self) -> np.ndarray:
        r = self.geometry.radius
        weight = self._eigen_grid() + self.geometry.mass
        base = np.full(self.max_mode + 1, math.pi * r)
        base[0] = 2 * math.pi * r
        energies = weight * (self.cos_coeffs ** 2 + self.sin_coeffs ** 2) * base[:, None]
        return energies

    def constant_energy(self) -> float:
        return self.geometry.mass * self.cos_coeffs[0, 0] ** 2 * (2 * math.pi * self.geometry.radius)

    def fluctuation_norm_sq(self) -> float:
        energies = self._mode_energies()
        energies[0, 0] = 0.0  # constant mode accounted by constant_energy
        return float(np.sum(energies))

    def norm_sq(self) -> float:
        return self.constant_energy() + self.fluctuation_norm_sq()

    def mean(self) -> float:
        return self.cos_coeffs[0, 0] / math.sqrt(sphere_area(self.geometry.d - 1))

    def drop_mean(self) -> "ProductFunction":
        coeffs = np.array(self.cos_coeffs)
        coeffs[0, 0] = 0.0
        return replace(self, cos_coeffs=_coeff_array(coeffs, "cos coefficients", ndim=2))

    def plus_constant(self, value: float) -> "ProductFunction":
        coeffs = np.array(self.cos_coeffs)
        coeffs[0, 0] += value * math.sqrt(sphere_area(self.geometry.d - 1))
        return replace(self, cos_coeffs=_coeff_array(coeffs, "cos coefficients", ndim=2))

    def scale(self, c: float) -> "ProductFunction":
        return replace(
            self,
            cos_coeffs=_coeff_array(c * self.cos_coeffs, "cos coefficients", ndim=2),
            sin_coeffs=_coeff_array(c * self.sin_coeffs, "sin coefficients", ndim=2),
        )

    def sample_grid(self, n_s: int, x) -> np.ndarray:
        """Values at s_i = i * (2 pi r)/n_s (rows) and latitudes x (columns)."""
        from .spectral import zonal_basis

        ztab = zonal_basis(self.geometry.d - 1, self.max_degree).table(np.asarray(x, dtype=float))
        costab, sintab = kernels.phase_tables(n_s)
        pc = np.ascontiguousarray(self.cos_coeffs @ ztab)
        ps = np.ascontiguousarray(self.sin_coeffs @ ztab)
        return kernels.tensor_synth(pc, ps, costab, sintab)

    def _grid_value(self, n_s: int, n_x: int) -> float:
        d = self.geometry.d
        beta = (d - 3) / 2
        rule = gauss_jacobi(n_x, beta)
        ztab = zonal_table(d - 1, self.max_degree, n_x, beta)
        costab, sintab = kernels.phase_tables(n_s)
        pc = np.ascontiguousarray(self.cos_coeffs @ ztab)
        ps = np.ascontiguousarray(self.sin_coeffs @ ztab)
        grid = kernels.tensor_synth(pc, ps, costab, sintab)
        s_weight = 2 * math.pi * self.geometry.radius / n_s
        return (
            sphere_area(d - 2)
            * s_weight
            * kernels.tensor_power_sum(grid, rule.weights, self.geometry.q)
        )

    def lq_integral(self, rel_tol: float = REL_TOL, max_points: Optional[int] = None):
        """(integral of |u|^q over the product manifold, estimated absolute error)."""
        s_cap = max_points or PRODUCT_S_GRID_CAP
        x_cap = max_points or PRODUCT_X_GRID_CAP
        n_s = next_power_of_two(max(64, 16 * (self.max_mode + 1)))
        n_x = max(32, 4 * (self.max_degree + 1))
        value = self._grid_value(n_s, n_x)
        prev = None
        while True:
            next_s = 2 * n_s if 2 * n_s <= s_cap else n_s
            next_x = 2 * n_x if 2 * n_x <= x_cap else n_x
            if next_s == n_s and next_x == n_x:
                raise QuadratureNotConverged(
                    f"product L^q grid hit caps ({s_cap}, {x_cap}) before rel_tol={rel_tol:g}",
                    last=value,
                    previous=prev,
                )
            n_s, n_x = next_s, next_x
            prev, value = value, self._grid_value(n_s, n_x)
            if _converged(value, prev, rel_tol):
                return value, abs(value - prev)


SpectralFunction = CircleFunction | SphereFunction | ProductFunction


def circle_function(geometry: Geometry, a0: float = 0.0, cos=(), sin=()) -> CircleFunction:
    if geometry.kind != CIRCLE:
        raise SobstabValidationError("circle_function requires a circle geometry")
    ac = _coeff_array(cos, "cos coefficients")
    bs = _coeff_array(sin, "sin coefficients")
    kmax = max(ac.shape[0], bs.shape[0])
    if kmax > MAX_MODES:
        raise SobstabValidationError(f"mode count capped at {MAX_MODES}, got {kmax}")
    ac = _coeff_array(np.pad(ac, (0, kmax - ac.shape[0])), "cos coefficients")
    bs = _coeff_array(np.pad(bs, (0, kmax - bs.shape[0])), "sin coefficients")
    return CircleFunction(geometry=geometry, a0=float(a0), cos_coeffs=ac, sin_coeffs=bs)


def sphere_function(geometry: Geometry, zonal) -> SphereFunction:
    if geometry.kind != SPHERE:
        raise SobstabValidationError("sphere_function requires a sphere geometry")
    coeffs = _coeff_array(zonal, "zonal coefficients")
    if coeffs.shape[0] == 0 or coeffs.shape[0] - 1 > MAX_MODES:
        raise SobstabValidationError(f"zonal degree must be in 0..{MAX_MODES}")
    return SphereFunction(geometry=geometry, zonal_coeffs=coeffs)


def product_function(geometry: Geometry, cos, sin=None) -> ProductFunction:
    if geometry.kind != PRODUCT:
        raise SobstabValidationError("product_function requires a product geometry")
    ac = _coeff_array(cos, "cos coefficients", ndim=2)
    if sin is None:
        bs = np.zeros_like(ac)
        bs.setflags(write=False)
    else:
        bs = _coeff_array(sin, "sin coefficients", ndim=2)
    if ac.shape != bs.shape:
        raise SobstabValidationError("cos and sin coefficient blocks must have equal shape")
    if ac.shape[0] - 1 > MAX_MODES or ac.shape[1] - 1 > MAX_MODES:
        raise SobstabValidationError(f"mode counts capped at {MAX_MODES}, got shape {ac.shape}")
    if np.any(bs[0] != 0.0):
        raise SobstabValidationError("sin coefficients for circle mode k=0 must vanish")
    return ProductFunction(geometry=geometry, cos_coeffs=ac, sin_coeffs=bs)


def constant_function(geometry: Geometry, value: float = 1.0) -> SpectralFunction:
    """The constant function `value` in the geometry's own coefficients."""
    if geometry.kind == CIRCLE:
        return circle_function(geometry, a0=value)
    if geometry.kind == SPHERE:
        return sphere_function(geometry, [value * math.sqrt(geometry.volume)])
    coeff = value * math.sqrt(sphere_area(geometry.d - 1))
    return product_function(geometry, [[coeff]])


def translate(u: SpectralFunction, fraction: float) -> SpectralFunction:
    """Rotate the circle variable by `fraction` of its period (circle/product)."""
    if isinstance(u, SphereFunction):
        raise SobstabValidationError("translate applies to the circle variable only")
    k = np.arange(1, u.max_mode + 1)
    phase = 2 * np.pi * k * fraction
    c, s = np.cos(phase), np.sin(phase)
    if isinstance(u, CircleFunction):
        ac = c * u.cos_coeffs - s * u.sin_coeffs
        bs = s * u.cos_coeffs + c * u.sin_coeffs
        return replace(
            u,
            cos_coeffs=_coeff_array(ac, "cos coefficients"),
            sin_coeffs=_coeff_array(bs, "sin coefficients"),
        )
    ac = np.array(u.cos_coeffs)
    bs = np.array(u.sin_coeffs)
    ac[1:], bs[1:] = (
        c[:, None] * u.cos_coeffs[1:] - s[:, None] * u.sin_coeffs[1:],
        s[:, None] * u.cos_coeffs[1:] + c[:, None] * u.sin_coeffs[1:],
    )
    return replace(
        u,
        cos_coeffs=_coeff_array(ac, "cos coefficients", ndim=2),
        sin_coeffs=_coeff_array(bs, "sin coefficients", ndim=2),
    )


@dataclass(frozen=True)
class DeficitReport:
    """Every scalar of one evaluation.

    ``quotient`` is None when the function is numerically constant
    (dist_sq <= 1e-14 norm_sq); ``quad_error`` is the estimated absolute
    quadrature error carried by ``deficit``.
    """

    norm_sq: float
    lq_norm: float
    deficit: float
    mean: float
    dist_sq: float
    quotient: Optional[float]
    quad_error: float

    def require_quotient(self) -> float:
        if self.quotient is None:
            raise DegenerateDistance(
                "stability quotient demanded for a numerically constant function"
            )
        return self.quotient


def h1_norm_sq(u: SpectralFunction) -> float:
    """Exact Parseval value of the squared norm defining the inequality."""
    return u.norm_sq()


def lq_norm(u: SpectralFunction, *, rel_tol: float = REL_TOL, max_points: Optional[int] = None) -> float:
    value, _ = u.lq_integral(rel_tol, max_points)
    return value ** (1.0 / u.geometry.q) if value > 0.0 else 0.0


def deficit(u: SpectralFunction, *, rel_tol: float = REL_TOL, max_points: Optional[int] = None) -> float:
    """norm_sq - (S or Y) * lq_norm^2; tiny negatives are quadrature noise."""
    return stability_report(u, rel_tol=rel_tol, max_points=max_points).deficit


def mean_project(u: SpectralFunction):
    """(mean, fluctuation): the constant projection and the rest, orthogonally."""
    return u.mean(), u.drop_mean()


def stability_report(
    u: SpectralFunction,
    *,
    require_quotient: bool = False,
    rel_tol: float = REL_TOL,
    max_points: Optional[int] = None,
) -> DeficitReport:
    """Evaluate all scalars of the stability inequality at u."""
    geometry = u.geometry
    const_energy = u.constant_energy()
    dist_sq = u.fluctuation_norm_sq()
    norm_sq = const_energy + dist_sq
    integral, err = u.lq_integral(rel_tol, max_points)
    q = geometry.q
    if integral > 0.0:
        lq = integral ** (1.0 / q)
        lq_sq = integral ** (2.0 / q)
        err_deficit = geometry.sharp_factor * (2.0 / q) * integral ** (2.0 / q - 1.0) * err
    else:
        lq = lq_sq = err_deficit = 0.0
    deficit_value = norm_sq - geometry.sharp_factor * lq_sq
    quad_error = err_deficit + 8.0 * _EPS * (norm_sq + geometry.sharp_factor * lq_sq)
    quotient = None
    if dist_sq > DISTANCE_FLOOR * norm_sq:
        quotient = norm_sq * deficit_value / (dist_sq * dist_sq)
    report = DeficitReport(
        norm_sq=norm_sq,
        lq_norm=lq,
        deficit=deficit_value,
        mean=u.mean(),
        dist_sq=dist_sq,
        quotient=quotient,
        quad_error=quad_error,
    )
    if require_quotient:
        report.require_quotient()
    return report
