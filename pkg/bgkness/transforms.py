"""Torus Fourier multipliers: the resolvent of 1 - v²∂_x², its Green's function and the kernel ψ.

The Green's function of 1 - v²∂_x² on the line is the two-sided exponential
e^{-|x|/|v|} / (2|v|); on the unit torus it is the periodization of that kernel, whose Fourier
symbol is 1 / (1 + (2πvk)²).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, exp, inf, isfinite

import numpy as np
from scipy import integrate

from .errors import ParameterError
from .model import DensityProfile, PhaseField, VelocityGrid, wavenumbers
from .model.fourier import collocation_points, collocation_size, from_grid, to_grid


def _check_velocity(v: float):
    if v == 0 or not isfinite(v):
        raise ParameterError(f"The resolvent kernel is singular at v={v}.")


def wrap(x: np.ndarray) -> np.ndarray:
    """Representative of x in [-1/2, 1/2]."""
    x = np.asarray(x, dtype=float)
    return x - np.round(x)


def resolvent_symbol(K: int, grid: VelocityGrid) -> np.ndarray:
    """1 / (1 + (2πvk)²) for every mode k and velocity node, shape (2K+1, n_velocity)."""
    return 1.0 / (1.0 + (2 * np.pi * np.outer(wavenumbers(K), grid.nodes)) ** 2)


def apply_resolvent(src: PhaseField) -> PhaseField:
    """(1 - v²∂_x²)^{-1} applied per Fourier mode and velocity node."""
    return src.with_modes(src.modes * resolvent_symbol(src.K, src.grid))


@dataclass(frozen=True)
class GreenKernel:
    """Green's function φ_v of 1 - v²∂_x² on the torus for a fixed velocity."""

    v: float

    def __post_init__(self):
        _check_velocity(self.v)

    @property
    def scale(self) -> float:
        return abs(self.v)

    def symbol(self, k) -> np.ndarray:
        return 1.0 / (1.0 + (2 * np.pi * self.v * np.asarray(k)) ** 2)

    def line(self, x) -> np.ndarray:
        """Kernel on the real line."""
        a = self.scale
        return np.exp(-np.abs(x) / a) / (2 * a)

    def periodized(self, x) -> np.ndarray:
        """Closed form of Σ_m e^{-|x+m|/|v|} / (2|v|).

        Equals cosh((1/2 - |x|)/|v|) / (2|v| sinh(1/(2|v|))), written with decaying exponentials
        only so that small |v| does not overflow.
        """
        a = self.scale
        half = 0.5 / a
        shift = (0.5 - np.abs(wrap(x))) / a
        numerator = np.exp(shift - half) + np.exp(-shift - half)
        return numerator / (-np.expm1(-2 * half)) / (2 * a)

    def image_sum(self, x, n_images: int | None = None) -> np.ndarray:
        """Direct summation over images |m| <= n_images."""
        if n_images is None:
            n_images = max(30, ceil(40 * self.scale))
        x = np.asarray(x, dtype=float)
        shifts = np.arange(-n_images, n_images + 1)
        return self.line(x[..., None] + shifts).sum(axis=-1)

    def fourier_sum(self, x, K: int) -> np.ndarray:
        """Truncated inverse Fourier series of the symbol."""
        x = np.asarray(x, dtype=float)
        k = np.arange(1, K + 1)
        return 1.0 + 2.0 * (self.symbol(k) * np.cos(2 * np.pi * x[..., None] * k)).sum(axis=-1)


def green_lp_norm(v: float, p: float) -> float:
    """‖φ_v‖ in L^p of the real line, in closed form."""
    _check_velocity(v)
    if p < 1:
        raise ParameterError(f"Lebesgue exponent must be >= 1, got {p}.")
    if p == inf:
        return 1 / (2 * abs(v))
    return (1 / p) ** (1 / p) * (1 / (2 * abs(v))) ** ((p - 1) / p)


def green_torus_lp_norm(v: float, p: float) -> float:
    """‖φ_v‖ in L^p of the torus, by adaptive quadrature of the periodized kernel."""
    kernel = GreenKernel(v)
    if p < 1:
        raise ParameterError(f"Lebesgue exponent must be >= 1, got {p}.")
    if p == inf:
        return float(kernel.periodized(0.0))

    half, _ = integrate.quad(lambda x: float(kernel.periodized(x)) ** p, 0.0, 0.5, limit=200)
    return (2 * half) ** (1 / p)


def green_lower_bound(v: float) -> float:
    """Uniform lower bound e^{-1/|v|} / (2|v|) of the periodized kernel."""
    _check_velocity(v)
    return exp(-1 / abs(v)) / (2 * abs(v))


class PoissonKernel:
    """ψ(x) = Σ_{k≠0} e^{2πikx} / (4π²k²), the zero-mean inverse of -∂_x² on the torus."""

    def __call__(self, x) -> np.ndarray:
        y = np.abs(wrap(x))
        return y**2 / 2 - y / 2 + 1 / 12

    @staticmethod
    def symbol(k) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        safe = np.where(k == 0, 1.0, k)
        return np.where(k == 0, 0.0, 1 / (4 * np.pi**2 * safe**2))

    def fourier_sum(self, x, K: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        k = np.arange(1, K + 1)
        return 2.0 * (self.symbol(k) * np.cos(2 * np.pi * x[..., None] * k)).sum(axis=-1)


PSI = PoissonKernel()


def psi_convolve(src: DensityProfile) -> DensityProfile:
    """ψ * (src - mean): mode k ≠ 0 scaled by 1/(4π²k²), mode 0 dropped."""
    return DensityProfile(src.modes * PSI.symbol(wavenumbers(src.K)))


__all__ = [
    "apply_resolvent",
    "collocation_points",
    "collocation_size",
    "from_grid",
    "GreenKernel",
    "green_lower_bound",
    "green_lp_norm",
    "green_torus_lp_norm",
    "PoissonKernel",
    "PSI",
    "psi_convolve",
    "resolvent_symbol",
    "to_grid",
    "wrap",
]
