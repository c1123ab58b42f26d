"""Model constants, Maxwellians, the uniform steady state, fields, moments and norms."""
from __future__ import annotations

from .collision import bgk_gain, conpres_diagnostics, local_maxwellian, stationarity_residual
from .fields import (
    DensityProfile,
    Moments,
    PhaseField,
    compute_moments,
    transport_symbol,
    weighted_norm,
)
from .fourier import (
    collocation_points,
    collocation_size,
    from_grid,
    sobolev_weights,
    to_grid,
    wavenumbers,
)
from .maxwell import (
    gaussian,
    maxwellian,
    mixture_moment,
    ness_fourth_moment,
    ness_moment,
    reservoir_mix,
    uniform_ness,
)
from .params import ModelParams, VelocityGrid

__all__ = [
    "bgk_gain",
    "collocation_points",
    "collocation_size",
    "compute_moments",
    "conpres_diagnostics",
    "DensityProfile",
    "from_grid",
    "gaussian",
    "local_maxwellian",
    "maxwellian",
    "mixture_moment",
    "ModelParams",
    "Moments",
    "ness_fourth_moment",
    "ness_moment",
    "PhaseField",
    "reservoir_mix",
    "sobolev_weights",
    "stationarity_residual",
    "to_grid",
    "transport_symbol",
    "uniform_ness",
    "VelocityGrid",
    "wavenumbers",
    "weighted_norm",
]
