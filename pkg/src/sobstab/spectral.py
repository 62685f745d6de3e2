"""Shared spectral building blocks: quadrature rules, sphere areas,
orthonormal zonal harmonics, and uniform-grid Fourier synthesis.

Conventions
-----------
* Gauss-Legendre rules integrate over [-1, 1] with unit weight.
* Gauss-Jacobi rules carry the latitude weight (1-x^2)^beta inside their
  weights, so the caller integrates plain function values.
* Zonal harmonics ``Y_l`` on the m-sphere are L^2(S^m)-orthonormal
  functions of the latitude x = last Cartesian coordinate, realized as
  Gegenbauer polynomials C_l^{(m-1)/2} normalized against the module's
  own weighted quadrature and signed positive at x = 1. With that
  convention Y_0 = |S^m|^{-1/2}, Y_1(x) = x sqrt((m+1)/|S^m|) and
  Y_2(x) = sqrt((m+1)^2 (m+3) / (2 m |S^m|)) (x^2 - 1/(m+1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from . import kernels
from .errors import AliasedGrid, DegreeOutOfRange, InvalidOrder, SobstabValidationError

MAX_QUADRATURE_ORDER = 4096
MAX_ZONAL_DEGREE = 64
MAX_SPHERE_DIM = 16


@dataclass(frozen=True)
class Quadrature:
    """Nodes and weights of a rule on (-1, 1).

    ``order`` is the point count n; a Gauss rule of order n integrates
    polynomials of degree <= 2n-1 exactly (against its weight function).
    """

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, values: np.ndarray) -> float:
        return float(self.weights @ values)


def _legendre_with_derivative(n: int, x: np.ndarray):
    """P_n and P_n' at x, by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    if n == 1:
        return p, np.ones_like(x)
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> Quadrature:
    """n-point Gauss-Legendre rule on [-1, 1].

    Nodes are Newton-refined from the classical cosine initial guesses
    until the Newton step drops below 1e-15; weights follow from the
    derivative values. Deterministic and cached.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUADRATURE_ORDER:
        raise InvalidOrder(f"Gauss-Legendre order must be in 1..{MAX_QUADRATURE_ORDER}, got {n!r}")
    i = np.arange(n)
    x = np.cos(np.pi * (4 * i + 3) / (4 * n + 2))
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    p, dp = _legendre_with_derivative(n, x)
    x -= p / dp  # final polish
    x = 0.5 * (x - x[::-1])  # enforce exact symmetry about 0
    _, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    order = np.argsort(x)
    x, w = x[order], w[order]
    if n % 2 == 1:
        x[n // 2] = 0.0
    x.setflags(write=False)
    w.setflags(write=False)
    return Quadrature(nodes=x, weights=w, order=n)


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, beta: float) -> Quadrature:
    """n-point Gauss rule for the weight (1-x^2)^beta on [-1, 1].

    The weight is absorbed into the quadrature weights. beta = 0 is the
    Gauss-Legendre rule; beta = (d-2)/2 is the latitude weight of the
    d-sphere.
    """
    if not 1 <= n <= MAX_QUADRATURE_ORDER:
        raise InvalidOrder(f"Gauss-Jacobi order must be in 1..{MAX_QUADRATURE_ORDER}, got {n!r}")
    if beta == 0.0:
        return gauss_legendre(n)
    x, w = roots_jacobi(n, beta, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return Quadrature(nodes=x, weights=w, order=n)


def sphere_area(d: int) -> float:
    """Surface measure |S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2)."""
    if not 1 <= d <= MAX_SPHERE_DIM:
        raise SobstabValidationError(f"sphere dimension must be in 1..{MAX_SPHERE_DIM}, got {d!r}")
    return 2.0 * math.pi ** ((d + 1) / 2) / math.gamma((d + 1) / 2)


def harmonic_multiplicity(d: int, ell: int) -> int:
    """Dimension of the spherical harmonics of degree ell on S^d."""
    if ell < 0:
        raise DegreeOutOfRange(f"degree must be nonnegative, got {ell}")
    if ell == 0:
        return 1
    return math.comb(ell + d, ell) - math.comb(ell + d - 2, ell - 2)


class ZonalBasis:
    """L^2(S^dim)-orthonormal zonal harmonics of degree 0..max_degree.

    Values are functions of the latitude x in [-1, 1]; the degree-ell
    member is a Laplace-Beltrami eigenfunction with eigenvalue
    ell (ell + dim - 1).
    """

    def __init__(self, dim: int, max_degree: int):
        if dim < 2:
            raise SobstabValidationError(f"zonal basis needs sphere dimension >= 2, got {dim}")
        if not 0 <= max_degree <= MAX_ZONAL_DEGREE:
            raise DegreeOutOfRange(
                f"max degree must be in 0..{MAX_ZONAL_DEGREE}, got {max_degree}"
            )
        self.dim = dim
        self.max_degree = max_degree
        self.weight_constant = sphere_area(dim - 1)  # |S^{dim-1}| in front of the x-integral
        rule = gauss_jacobi(max_degree + 8, (dim - 2) / 2)
        raw = self._raw_table(rule.nodes)
        norm_sq = self.weight_constant * (raw * raw) @ rule.weights
        self._norms = np.sqrt(norm_sq)
        self._norms.setflags(write=False)

    def _raw_table(self, x: np.ndarray) -> np.ndarray:
        """Unnormalized Gegenbauer values C_l^{(dim-1)/2}(x), rows l = 0..L."""
        lam = (self.dim - 1) / 2
        nl = self.max_degree + 1
        table = np.empty((nl, x.shape[0]))
        table[0] = 1.0
        if nl > 1:
            table[1] = 2.0 * lam * x
        for ell in range(2, nl):
            table[ell] = (
                2.0 * (ell + lam - 1) * x * table[ell - 1]
                - (ell + 2 * lam - 2) * table[ell - 2]
            ) / ell
        return table

    def table(self, x: np.ndarray) -> np.ndarray:
        """Orthonormal values, shape (max_degree+1, len(x))."""
        x = np.asarray(x, dtype=float)
        return self._raw_table(x) / self._norms[:, None]

    def eval(self, ell: int, x) -> float:
        if not 0 <= ell <= self.max_degree:
            raise DegreeOutOfRange(
                f"degree {ell} outside basis truncation 0..{self.max_degree}"
            )
        return float(self.table(np.atleast_1d(np.asarray(x, dtype=float)))[ell][0])

    def eigenvalue(self, ell: int) -> float:
        return float(ell * (ell + self.dim - 1))


@lru_cache(maxsize=64)
def zonal_basis(dim: int, max_degree: int) -> ZonalBasis:
    return ZonalBasis(dim, max_degree)


@lru_cache(maxsize=256)
def zonal_table(dim: int, max_degree: int, rule_order: int, beta: float) -> np.ndarray:
    """Cached orthonormal zonal table at the nodes of gauss_jacobi(rule_order, beta)."""
    rule = gauss_jacobi(rule_order, beta)
    table = zonal_basis(dim, max_degree).table(rule.nodes)
    table.setflags(write=False)
    return table


def zonal_eval(d: int, ell: int, x) -> float:
    """Value at latitude x of the degree-ell orthonormal zonal harmonic on S^d."""
    if not 0 <= ell <= MAX_ZONAL_DEGREE:
        raise DegreeOutOfRange(f"degree must be in 0..{MAX_ZONAL_DEGREE}, got {ell}")
    return zonal_basis(d, ell).eval(ell, x)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def circle_synthesis(a0: float, cos_coeffs, sin_coeffs, n: int) -> np.ndarray:
    """Values of a0 + sum_k (a_k cos 2 pi k t + b_k sin 2 pi k t) at t_j = j/n.

    The grid must be a power of two with n >= 4K + 4 so the companion
    analysis transform recovers the coefficients exactly (no aliasing).
    """
    ac = np.asarray(cos_coeffs, dtype=float)
    bs = np.asarray(sin_coeffs, dtype=float)
    if ac.shape != bs.shape or ac.ndim != 1:
        raise SobstabValidationError("cos and sin coefficient arrays must be 1-d and equal length")
    kmax = ac.shape[0]
    if n < 4 * kmax + 4 or not _is_power_of_two(n):
        raise AliasedGrid(
            f"grid size {n} must be a power of two with n >= 4K+4 = {4 * kmax + 4}"
        )
    costab, sintab = kernels.phase_tables(n)
    return kernels.circle_synth(float(a0), ac, bs, costab, sintab)


def circle_analysis(values: np.ndarray, max_mode: int):
    """Inverse of circle_synthesis on its own grid: (a0, cos, sin) up to max_mode."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 4 * max_mode + 4 or not _is_power_of_two(n):
        raise AliasedGrid(
            f"grid size {n} must be a power of two with n >= 4K+4 = {4 * max_mode + 4}"
        )
    costab, sintab = kernels.phase_tables(n)
    a0 = float(np.mean(values))
    ac = np.empty(max_mode)
    bs = np.empty(max_mode)
    j = np.arange(n)
    for k in range(1, max_mode + 1):
        idx = (k * j) % n
        ac[k - 1] = 2.0 * float(values @ costab[idx]) / n
        bs[k - 1] = 2.0 * float(values @ sintab[idx]) / n
    return a0, ac, bs
