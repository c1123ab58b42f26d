"""Time integration of the nonlinear and the linearized equation, and decay experiments."""
from __future__ import annotations

from .decay import (
    DecayReport,
    EvolutionConfig,
    fit_decay,
    lyapunov_functional,
    mode_blocks,
    run_decay_experiment,
)
from .presets import Density, Mode, Perturbation, Presets, Random
from .steps import (
    LinearPropagator,
    Splitting,
    linearized_collision,
    maxwellian_linearization,
    nonlinear_remainder,
    relax_linearized,
    split_step,
    step_collision,
    step_linearized,
    step_transport,
)

__all__ = [
    "DecayReport",
    "Density",
    "EvolutionConfig",
    "fit_decay",
    "linearized_collision",
    "LinearPropagator",
    "lyapunov_functional",
    "maxwellian_linearization",
    "Mode",
    "mode_blocks",
    "nonlinear_remainder",
    "Perturbation",
    "Presets",
    "Random",
    "relax_linearized",
    "run_decay_experiment",
    "split_step",
    "Splitting",
    "step_collision",
    "step_linearized",
    "step_transport",
]
