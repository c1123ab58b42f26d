"""Numerical laboratory for the BGK gas on the torus coupled to two thermal reservoirs.

Steady states are computed as fixed points of the density map Ψ_α, the linearized operator is
analysed mode by mode in an orthonormal velocity basis, and perturbations of the uniform steady
state are evolved in time to measure their exponential decay.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import ConditioningError, ConfigError, DomainError, ParameterError, ShapeError
from .evolution import EvolutionConfig, Presets, run_decay_experiment
from .log import CONSOLE, LOG
from .model import DensityProfile, ModelParams, PhaseField, VelocityGrid
from .ness import apriori_bounds, iterate_fixed_point, psi_map, reconstruct_ness
from .spectral import build_basis, dms_constants, explicit_rate, gap_table, numeric_gap

__all__ = [
    "apriori_bounds",
    "build_basis",
    "ConditioningError",
    "ConfigError",
    "CONSOLE",
    "DensityProfile",
    "dms_constants",
    "DomainError",
    "EvolutionConfig",
    "explicit_rate",
    "gap_table",
    "iterate_fixed_point",
    "LOG",
    "ModelParams",
    "numeric_gap",
    "ParameterError",
    "PhaseField",
    "Presets",
    "psi_map",
    "reconstruct_ness",
    "run_decay_experiment",
    "ShapeError",
    "VelocityGrid",
]
