"""Density profiles and phase-space fields in Fourier-in-x form, their moments and norms."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError
from ..log import dict_view
from .fourier import (
    collocation_size,
    from_grid,
    is_hermitian,
    sobolev_weights,
    to_grid,
    truncation_order,
    wavenumbers,
)
from .maxwell import uniform_ness
from .params import ModelParams, VelocityGrid


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """A real function on the torus given by its Fourier modes k ∈ {-K..K}."""

    modes: np.ndarray

    def __post_init__(self):
        modes = _frozen(self.modes)
        if modes.ndim != 1:
            raise ShapeError(f"Density modes must be 1d, got shape {modes.shape}.")
        truncation_order(modes)
        object.__setattr__(self, "modes", modes)

    @classmethod
    def constant(cls, K: int, value: float = 1.0) -> DensityProfile:
        modes = np.zeros(2 * K + 1, dtype=complex)
        modes[K] = value
        return cls(modes)

    @classmethod
    def from_cosines(
        cls, K: int, amplitudes: Mapping[int, float], mean: float = 1.0
    ) -> DensityProfile:
        """mean + Σ a_k cos(2πkx)."""
        modes = np.zeros(2 * K + 1, dtype=complex)
        modes[K] = mean
        for k, amp in amplitudes.items():
            if not 0 < k <= K:
                raise ShapeError(f"Cosine mode {k} outside 1..{K}.")
            modes[K + k] += amp / 2
            modes[K - k] += amp / 2
        return cls(modes)

    @classmethod
    def random(
        cls, K: int, seed: int = 0, kmax: int = 4, spread: float = 0.5
    ) -> DensityProfile:
        """Band-limited positive density with mean 1 and modes up to min(kmax, K).

        The total amplitude is at most `spread` < 1, so the minimum stays above 1 - spread.
        """
        kmax = min(kmax, K)
        rng = np.random.default_rng(seed)
        half = rng.standard_normal(kmax) + 1j * rng.standard_normal(kmax)
        half *= spread / (2 * np.abs(half).sum())

        modes = np.zeros(2 * K + 1, dtype=complex)
        modes[K] = 1.0
        modes[K + 1 : K + kmax + 1] = half
        modes[K - kmax : K] = half[::-1].conj()
        return cls(modes)

    @classmethod
    def from_values(cls, values: np.ndarray, K: int) -> DensityProfile:
        return cls(from_grid(values, K))

    @property
    def K(self) -> int:
        return (len(self.modes) - 1) // 2

    @property
    def mean(self) -> float:
        return float(self.modes[self.K].real)

    def values(self, n: int | None = None) -> np.ndarray:
        return to_grid(self.modes, n or collocation_size(self.K))

    def minimum(self, n: int | None = None) -> float:
        return float(self.values(n).min())

    def sup_norm(self, n: int | None = None) -> float:
        return float(np.abs(self.values(n)).max())

    def l2_norm(self) -> float:
        """L² norm on the torus via Parseval."""
        return float(np.sqrt(np.sum(np.abs(self.modes) ** 2)))

    def distance(self, other: DensityProfile) -> float:
        return (self - other).l2_norm()

    def is_real(self, atol: float = 1e-14) -> bool:
        return is_hermitian(self.modes, atol)

    def is_probability(self, n: int | None = None, atol: float = 1e-10) -> bool:
        return abs(self.mean - 1) <= atol and self.minimum(n) >= -atol

    def _check(self, other: DensityProfile):
        if other.K != self.K:
            raise ShapeError(f"Truncation mismatch: K={self.K} vs K={other.K}.")

    def __add__(self, other: DensityProfile) -> DensityProfile:
        self._check(other)
        return DensityProfile(self.modes + other.modes)

    def __sub__(self, other: DensityProfile) -> DensityProfile:
        self._check(other)
        return DensityProfile(self.modes - other.modes)

    def __mul__(self, scalar: float) -> DensityProfile:
        return DensityProfile(self.modes * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PhaseField:
    """f(x, v) as Fourier modes in x (axis 0) sampled at the velocity nodes (axis 1)."""

    modes: np.ndarray
    grid: VelocityGrid

    def __post_init__(self):
        modes = _frozen(self.modes)
        if modes.ndim != 2 or modes.shape[1] != self.grid.size:
            raise ShapeError(
                f"Phase field modes must have shape (2K+1, {self.grid.size}), got {modes.shape}."
            )
        truncation_order(modes)
        object.__setattr__(self, "modes", modes)

    @classmethod
    def zeros(cls, grid: VelocityGrid, K: int) -> PhaseField:
        return cls(np.zeros((2 * K + 1, grid.size), dtype=complex), grid)

    @classmethod
    def uniform(cls, profile: np.ndarray, grid: VelocityGrid, K: int) -> PhaseField:
        """A field constant in x, i.e. only mode 0 populated."""
        modes = np.zeros((2 * K + 1, grid.size), dtype=complex)
        modes[K] = profile
        return cls(modes, grid)

    @classmethod
    def product(
        cls, density: DensityProfile, profile: np.ndarray, grid: VelocityGrid
    ) -> PhaseField:
        """ρ(x)·g(v)."""
        return cls(np.outer(density.modes, profile), grid)

    @classmethod
    def from_values(cls, values: np.ndarray, grid: VelocityGrid, K: int) -> PhaseField:
        return cls(from_grid(values, K), grid)

    @property
    def K(self) -> int:
        return (self.modes.shape[0] - 1) // 2

    def mode(self, k: int) -> np.ndarray:
        return self.modes[self.K + k]

    def values(self, n: int | None = None) -> np.ndarray:
        return to_grid(self.modes, n or collocation_size(self.K))

    def mass(self) -> float:
        return float(self.grid.integrate(self.mode(0)).real)

    def density(self) -> DensityProfile:
        return DensityProfile(self.grid.integrate(self.modes))

    def with_modes(self, modes: np.ndarray) -> PhaseField:
        return PhaseField(modes, self.grid)

    def is_real(self, atol: float = 1e-14) -> bool:
        return is_hermitian(self.modes, atol)

    def _check(self, other: PhaseField):
        self.grid.check(other.grid)
        if other.K != self.K:
            raise ShapeError(f"Truncation mismatch: K={self.K} vs K={other.K}.")

    def __add__(self, other: PhaseField) -> PhaseField:
        self._check(other)
        return self.with_modes(self.modes + other.modes)

    def __sub__(self, other: PhaseField) -> PhaseField:
        self._check(other)
        return self.with_modes(self.modes - other.modes)

    def __mul__(self, scalar: float) -> PhaseField:
        return self.with_modes(self.modes * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class Moments:
    """Velocity moments ρ_f, m_f, P_f and ∫v⁴f of a phase field, as profiles in x."""

    rho: DensityProfile
    momentum: DensityProfile
    pressure: DensityProfile
    fourth: DensityProfile

    def temperature(self, n: int | None = None) -> np.ndarray:
        return self.pressure.values(n) / self.rho.values(n)

    def __rich__(self):
        return dict_view(
            {
                "mass": self.rho.mean,
                "rho_min": self.rho.minimum(),
                "momentum_sup": self.momentum.sup_norm(),
                "pressure_mean": self.pressure.mean,
                "fourth_mean": self.fourth.mean,
            },
            title="Moments",
        )


def compute_moments(f: PhaseField) -> Moments:
    grid = f.grid
    rho, momentum, pressure, fourth = (
        DensityProfile(grid.moment(f.modes, order)) for order in (0, 1, 2, 4)
    )
    return Moments(rho, momentum, pressure, fourth)


def weighted_norm(
    h: PhaseField,
    params: ModelParams,
    sobolev: bool = False,
    f_inf: np.ndarray | None = None,
) -> float:
    """‖h‖ in L²(dx dv / f∞), or its H¹ variant weighting mode k by 1 + (2πk)²."""
    if f_inf is None:
        f_inf = uniform_ness(params, h.grid)
    elif np.shape(f_inf) != (h.grid.size,):
        raise ShapeError(f"Weight has shape {np.shape(f_inf)}, grid has {h.grid.size} nodes.")

    per_mode = h.grid.integrate(np.abs(h.modes) ** 2 / f_inf)
    if sobolev:
        per_mode = per_mode * sobolev_weights(h.K)
    return float(np.sqrt(per_mode.sum()))


def transport_symbol(K: int, grid: VelocityGrid) -> np.ndarray:
    """Symbol 2πikv of v∂_x, shape (2K+1, n_velocity)."""
    return 2j * np.pi * np.outer(wavenumbers(K), grid.nodes)
