"""A-priori bounds on steady densities and the diagnostics that audit them."""
from __future__ import annotations

from dataclasses import dataclass
from math import exp, gamma, pi, sqrt

import numpy as np
from scipy import integrate
from scipy.special import erf

from ..errors import ParameterError
from ..log import dict_view
from ..model import (
    DensityProfile,
    ModelParams,
    PhaseField,
    VelocityGrid,
    compute_moments,
    reservoir_mix,
)
from ..transforms import green_lp_norm, green_torus_lp_norm, psi_convolve
from .fixed_point import contraction_norm_estimate
from .maps import psi_map, resolvent_marginal


def _abs_moment_gaussian(r: float) -> float:
    """∫ |w|^{-r} e^{-w²/2} dw = 2^{(1-r)/2} Γ((1-r)/2)."""
    return 2 ** ((1 - r) / 2) * gamma((1 - r) / 2)


def _abs_moment_gaussian_quad(r: float, cutoff: float = 40.0) -> float:
    """Same integral with the algebraic endpoint singularity handled by QUADPACK's weight."""
    value, _ = integrate.quad(
        lambda w: exp(-(w**2) / 2), 0.0, cutoff, weight="alg", wvar=(-r, 0.0)
    )
    return 2 * value


def reservoir_band_mass(params: ModelParams, low: float = 1.0, high: float = 2.0) -> float:
    """∫_{low ≤ |v| ≤ high} G dv."""

    def band(temperature):
        scale = sqrt(2 * temperature)
        return erf(high / scale) - erf(low / scale)

    return 0.5 * (band(params.t1) + band(params.t2))


def lower_moment_bound(params: ModelParams) -> float:
    """Lower bound 1 / (3(2 - α) + (1 - α)/(6P∞)) on steady densities from the fourth moment."""
    alpha = params.alpha
    return 1 / (3 * (2 - alpha) + (1 - alpha) / (6 * params.p_inf))


def lower_pointwise_bound(params: ModelParams) -> float:
    """r∞ = (1 - α)/(4√e) ∫_{1≤|v|≤2} G dv, a pointwise lower bound on Ψ_α outputs."""
    return (1 - params.alpha) / (4 * sqrt(exp(1))) * reservoir_band_mass(params)


@dataclass
class AprioriBounds:
    alpha: float
    r: float
    lower_moment: float
    lower_pointwise: float
    a_r: float
    b_r: float
    a_r_quad: float
    b_r_quad: float
    c_eps: float
    delta_g: float
    contraction_upper: float

    @property
    def quadrature_gap(self) -> float:
        return max(abs(self.a_r - self.a_r_quad), abs(self.b_r - self.b_r_quad))

    def __rich__(self):
        return dict_view(self.__dict__, title="A-priori bounds")


def apriori_bounds(
    params: ModelParams,
    r: float = 0.5,
    grid: VelocityGrid | None = None,
    K: int = 16,
) -> AprioriBounds:
    """All explicit constants, with measured surrogates for the contraction constants.

    `c_eps` is the operator norm of the Maxwellian part of DΨ at ρ̄ ≡ 1 and `delta_g` is
    1 - γ_1 of the reservoir part.
    """
    if not 0 <= r < 1:
        raise ParameterError(f"Exponent r must lie in [0, 1), got {r}.")

    grid = grid or VelocityGrid.for_params(params)
    p_inf = params.p_inf

    a_r = _abs_moment_gaussian(r) / sqrt(2 * pi * p_inf**r)
    a_r_quad = _abs_moment_gaussian_quad(r) / sqrt(2 * pi * p_inf**r)

    scale = _abs_moment_gaussian(r) / sqrt(2 * pi)
    b_r = 0.5 * scale * (params.t1 ** (-r / 2) + params.t2 ** (-r / 2))
    scale_quad = _abs_moment_gaussian_quad(r) / sqrt(2 * pi)
    b_r_quad = 0.5 * scale_quad * (params.t1 ** (-r / 2) + params.t2 ** (-r / 2))

    rho_bar = DensityProfile.constant(K)
    c_eps = contraction_norm_estimate(rho_bar, params.replace(alpha=1.0), grid).value
    delta_g = 1 - resolvent_marginal(reservoir_mix(params, grid), 1, grid)
    upper = params.alpha * c_eps + (1 - params.alpha) * (1 - delta_g)

    return AprioriBounds(
        alpha=params.alpha,
        r=r,
        lower_moment=lower_moment_bound(params),
        lower_pointwise=lower_pointwise_bound(params),
        a_r=a_r,
        b_r=b_r,
        a_r_quad=a_r_quad,
        b_r_quad=b_r_quad,
        c_eps=c_eps,
        delta_g=delta_g,
        contraction_upper=upper,
    )


@dataclass
class FourthMomentCheck:
    """Spatial oscillation of ∫v⁴f against its bound (1 - α)(T1 + T2)/12.

    For a steady state the oscillation equals (1 - α)T∞ ψ * (ρ_f - 1); `kernel_residual` is the
    sup distance to that convolution.
    """

    deviation: float
    bound: float
    kernel_residual: float

    @property
    def holds(self) -> bool:
        return self.deviation <= self.bound + 1e-8

    def __float__(self) -> float:
        return self.deviation

    def __rich__(self):
        return dict_view({**self.__dict__, "holds": self.holds}, title="Fourth moment")


def verify_fourth_moment_relation(f: PhaseField, params: ModelParams) -> FourthMomentCheck:
    moments = compute_moments(f)
    fourth = moments.fourth
    oscillation = fourth - DensityProfile.constant(fourth.K, fourth.mean)
    predicted = (1 - params.alpha) * params.t_inf * psi_convolve(moments.rho)

    return FourthMomentCheck(
        deviation=oscillation.sup_norm(),
        bound=(1 - params.alpha) * (params.t1 + params.t2) / 12,
        kernel_residual=(oscillation - predicted).sup_norm(),
    )


def _torus_mean(values: np.ndarray) -> float:
    return float(np.mean(values))


@dataclass
class IntegrabilityCheck:
    """Both sides of ∫ρ^{1+r} ≤ α A_r ∫ρ0^{1+r/2} + B_r for ρ = Ψ_α[ρ0] (reported only)."""

    r: float
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def __rich__(self):
        return dict_view({**self.__dict__, "holds": self.holds}, title="Gain of integrability")


def integrability_residual(
    rho0: DensityProfile, params: ModelParams, grid: VelocityGrid, r: float = 0.5
) -> IntegrabilityCheck:
    bounds = apriori_bounds(params, r, grid, K=4)
    rho = psi_map(rho0, params, grid)
    lhs = _torus_mean(np.clip(rho.values(), 0, None) ** (1 + r))
    rhs = params.alpha * bounds.a_r * _torus_mean(rho0.values() ** (1 + r / 2)) + bounds.b_r
    return IntegrabilityCheck(r, lhs, rhs)


@dataclass
class UpperBoundAudit:
    """Sup of a steady density next to the Hölder chain that bounds it.

    The chain uses exponents 7/4 for ρ and 7, 7/3 for the kernel; `chain_torus` uses periodized
    kernel norms and is a valid bound, `chain_line` uses the closed-form line norms.
    """

    sup: float
    minimum: float
    l74_norm: float
    chain_line: float
    chain_torus: float

    @property
    def holds(self) -> bool:
        return self.sup <= self.chain_torus * (1 + 1e-8)

    def __rich__(self):
        return dict_view({**self.__dict__, "holds": self.holds}, title="Upper bound audit")


def upper_bound_audit(
    rho: DensityProfile, params: ModelParams, grid: VelocityGrid
) -> UpperBoundAudit:
    values = rho.values()
    l74 = _torus_mean(np.clip(values, 0, None) ** 1.75) ** (1 / 1.75)

    v = grid.nodes
    r_inf = lower_pointwise_bound(params)
    p_inf = params.p_inf
    maxw_weight = np.exp(-r_inf * v**2 / (2 * p_inf)) / sqrt(2 * pi * p_inf)
    mix_weight = reservoir_mix(params, grid)

    def chain(norm):
        # The kernel degenerates at v = 0, a single node of zero measure.
        n7 = np.array([norm(x, 7) if x else 0.0 for x in v])
        n73 = np.array([norm(x, 7 / 3) if x else 0.0 for x in v])
        maxw_part = params.alpha * grid.integrate(maxw_weight * n7) * l74**1.5
        mix_part = (1 - params.alpha) * grid.integrate(mix_weight * n73) * l74
        return float(maxw_part + mix_part)

    return UpperBoundAudit(
        sup=float(values.max()),
        minimum=float(values.min()),
        l74_norm=float(l74),
        chain_line=chain(green_lp_norm),
        chain_torus=chain(green_torus_lp_norm),
    )


__all__ = [
    "apriori_bounds",
    "AprioriBounds",
    "FourthMomentCheck",
    "integrability_residual",
    "IntegrabilityCheck",
    "lower_moment_bound",
    "lower_pointwise_bound",
    "upper_bound_audit",
    "UpperBoundAudit",
    "verify_fourth_moment_relation",
]
