"""Steady states: the density map Ψ_α, its fixed points, contraction and a-priori bounds."""
from __future__ import annotations

from .bounds import (
    AprioriBounds,
    FourthMomentCheck,
    IntegrabilityCheck,
    UpperBoundAudit,
    apriori_bounds,
    integrability_residual,
    lower_moment_bound,
    lower_pointwise_bound,
    upper_bound_audit,
    verify_fourth_moment_relation,
)
from .fixed_point import (
    AlphaSweep,
    FixedPointReport,
    NormEstimate,
    alpha_sweep,
    contraction_norm_estimate,
    density_jacobian,
    iterate_fixed_point,
    operator_norm,
)
from .maps import (
    forcing,
    local_maxwellian_of_density,
    ness_residual,
    psi_map,
    reconstruct_ness,
    resolvent_marginal,
    resolvent_marginal_quad,
)

__all__ = [
    "alpha_sweep",
    "AlphaSweep",
    "apriori_bounds",
    "AprioriBounds",
    "contraction_norm_estimate",
    "density_jacobian",
    "FixedPointReport",
    "forcing",
    "FourthMomentCheck",
    "integrability_residual",
    "IntegrabilityCheck",
    "iterate_fixed_point",
    "local_maxwellian_of_density",
    "lower_moment_bound",
    "lower_pointwise_bound",
    "ness_residual",
    "NormEstimate",
    "operator_norm",
    "psi_map",
    "reconstruct_ness",
    "resolvent_marginal",
    "resolvent_marginal_quad",
    "upper_bound_audit",
    "UpperBoundAudit",
    "verify_fourth_moment_relation",
]
