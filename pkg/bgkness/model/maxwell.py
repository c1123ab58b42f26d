"""Maxwellians, the reservoir mixture and the spatially uniform steady state."""
from __future__ import annotations

import numpy as np
from scipy.special import factorial2

from ..errors import ParameterError
from .params import ModelParams, VelocityGrid


def gaussian(v: np.ndarray, temperature) -> np.ndarray:
    """Centered Gaussian with variance `temperature`, broadcasting over both arguments."""
    temperature = np.asarray(temperature, dtype=float)
    return np.exp(-(v**2) / (2 * temperature)) / np.sqrt(2 * np.pi * temperature)


def maxwellian(temperature: float, grid: VelocityGrid) -> np.ndarray:
    if not temperature > 0:
        raise ParameterError(f"Maxwellian temperature must be positive, got {temperature}.")
    return gaussian(grid.nodes, temperature)


def reservoir_mix(params: ModelParams, grid: VelocityGrid) -> np.ndarray:
    """G = (M_T1 + M_T2) / 2."""
    return 0.5 * (maxwellian(params.t1, grid) + maxwellian(params.t2, grid))


def uniform_ness(params: ModelParams, grid: VelocityGrid) -> np.ndarray:
    """f∞ = α M_T∞ + (1 - α) G, the spatially uniform steady state."""
    alpha = params.alpha
    return alpha * maxwellian(params.t_inf, grid) + (1 - alpha) * reservoir_mix(params, grid)


def gaussian_moment(temperature: float, order: int) -> float:
    """∫ v^order M_T dv."""
    if order % 2:
        return 0.0
    if order == 0:
        return 1.0
    return float(factorial2(order - 1, exact=True)) * temperature ** (order // 2)


def mixture_moment(params: ModelParams, order: int) -> float:
    """∫ v^order G dv."""
    return 0.5 * (gaussian_moment(params.t1, order) + gaussian_moment(params.t2, order))


def ness_moment(params: ModelParams, order: int) -> float:
    """∫ v^order f∞ dv in closed form."""
    alpha = params.alpha
    return alpha * gaussian_moment(params.t_inf, order) + (1 - alpha) * mixture_moment(
        params, order
    )


def ness_fourth_moment(params: ModelParams) -> float:
    """3[α T∞² + (1 - α)(T1² + T2²)/2]."""
    return ness_moment(params, 4)
