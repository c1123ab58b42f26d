"""The density map Ψ_α and reconstruction of a steady state from a fixed density.

Nonlinear evaluations happen on the collocation grid (4K points) and are projected back to K
Fourier modes.
"""
from __future__ import annotations

import numpy as np
from scipy import integrate

from ..errors import DomainError
from ..model import (
    DensityProfile,
    ModelParams,
    PhaseField,
    VelocityGrid,
    collocation_size,
    gaussian,
    local_maxwellian,
    reservoir_mix,
    transport_symbol,
)
from ..transforms import apply_resolvent, resolvent_symbol


def local_maxwellian_of_density(
    rho: DensityProfile, params: ModelParams, grid: VelocityGrid
) -> PhaseField:
    """M[ρ] = ρ M_{P∞/ρ}: the Maxwellian with density ρ(x) at constant pressure P∞."""
    values = rho.values(collocation_size(rho.K))
    if values.min() <= 0:
        raise DomainError(
            f"Density reconstruction is not positive (min {values.min():.3e}).",
            minimum=float(values.min()),
        )

    maxw = local_maxwellian(values, params.p_inf / values, grid, normalize=True)
    return PhaseField.from_values(maxw, grid, rho.K)


def forcing(rho: DensityProfile, params: ModelParams, grid: VelocityGrid) -> PhaseField:
    """F_α[ρ] = α M[ρ] + (1 - α) ρ G."""
    mixed = PhaseField.product(rho, reservoir_mix(params, grid), grid)
    if params.alpha == 0:
        return mixed
    maxw = local_maxwellian_of_density(rho, params, grid)
    return params.alpha * maxw + (1 - params.alpha) * mixed


def psi_map(rho: DensityProfile, params: ModelParams, grid: VelocityGrid) -> DensityProfile:
    """Ψ_α[ρ]: velocity marginal of the resolvent applied to the forcing."""
    resolved = apply_resolvent(forcing(rho, params, grid))
    return DensityProfile(grid.integrate(resolved.modes))


def reconstruct_ness(rho: DensityProfile, params: ModelParams, grid: VelocityGrid) -> PhaseField:
    """f = E + O with E = (1 - v²∂_x²)^{-1} F_α[ρ] (even in v) and O = -v∂_x E (odd in v)."""
    even = apply_resolvent(forcing(rho, params, grid))
    odd = -even.modes * transport_symbol(rho.K, grid)
    return even.with_modes(even.modes + odd)


def ness_residual(f: PhaseField, params: ModelParams) -> float:
    """Sup of |v∂_x f - F_α[ρ_f] + f| over collocation points."""
    rho = f.density()
    streaming = f.modes * transport_symbol(f.K, f.grid)
    residual = streaming - forcing(rho, params, f.grid).modes + f.modes
    return float(np.abs(f.with_modes(residual).values()).max())


def resolvent_marginal(profile: np.ndarray, k: int, grid: VelocityGrid) -> float:
    """γ_k = ∫ w(v) / (1 + (2πvk)²) dv for a velocity profile w."""
    symbol = resolvent_symbol(abs(k), grid)[0]
    return float(grid.integrate(profile * symbol))


def resolvent_marginal_quad(params: ModelParams, k: int) -> float:
    """γ_k for the reservoir mixture G by adaptive quadrature on the real line."""

    def integrand(v):
        mix = 0.5 * (gaussian(v, params.t1) + gaussian(v, params.t2))
        return float(mix) / (1 + (2 * np.pi * v * k) ** 2)

    half, _ = integrate.quad(integrand, 0.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    return 2 * half
