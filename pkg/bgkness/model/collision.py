"""The BGK gain term with the local Maxwellian, and steady-state diagnostics."""
from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .fields import PhaseField, compute_moments, transport_symbol
from .fourier import collocation_size
from .maxwell import gaussian, reservoir_mix
from .params import ModelParams, VelocityGrid


def local_maxwellian(
    rho: np.ndarray, temperature: np.ndarray, grid: VelocityGrid, normalize: bool = False
) -> np.ndarray:
    """ρ(x) M_{T(x)}(v) at collocation points, shape (n_points, n_velocity).

    With `normalize`, each Maxwellian is rescaled to unit quadrature mass, so that the v-integral
    equals ρ(x) to round-off.
    """
    rho = np.asarray(rho, dtype=float)
    temperature = np.asarray(temperature, dtype=float)
    if rho.min() <= 0 or temperature.min() <= 0:
        raise DomainError(
            "Local Maxwellian needs positive density and temperature.",
            minimum=float(min(rho.min(), temperature.min())),
        )

    maxw = gaussian(grid.nodes[None, :], temperature[:, None])
    if normalize:
        maxw = maxw / grid.integrate(maxw)[:, None]
    return rho[:, None] * maxw


def bgk_gain(f: PhaseField, params: ModelParams, n: int | None = None) -> PhaseField:
    """α M_f + (1 - α) ρ_f G with M_f built from f's own density and temperature."""
    grid = f.grid
    n = n or collocation_size(f.K)
    vals = f.values(n)
    rho = grid.integrate(vals)
    pressure = grid.moment(vals, 2)
    if rho.min() <= 0:
        raise DomainError("Density lost positivity.", minimum=float(rho.min()))

    maxw = local_maxwellian(rho, pressure / rho, grid, normalize=True)
    gain = params.alpha * maxw + (1 - params.alpha) * rho[:, None] * reservoir_mix(params, grid)
    return PhaseField.from_values(gain, grid, f.K)


def stationarity_residual(f: PhaseField, params: ModelParams) -> float:
    """Sup over collocation points of |α M_f + (1 - α) ρ_f G - f - v∂_x f|."""
    streaming = f.modes * transport_symbol(f.K, f.grid)
    residual = bgk_gain(f, params).modes - f.modes - streaming
    return float(np.abs(f.with_modes(residual).values()).max())


def conpres_diagnostics(f: PhaseField, params: ModelParams) -> tuple[float, float]:
    """Sup deviation of the pressure from P∞ and sup of the momentum."""
    moments = compute_moments(f)
    pressure_dev = float(np.abs(moments.pressure.values() - params.p_inf).max())
    momentum_sup = moments.momentum.sup_norm()
    return pressure_dev, momentum_sup
