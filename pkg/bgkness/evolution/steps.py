"""Time steps for the nonlinear and the linearized equation.

Transport and relaxation are each integrated exactly and composed by operator splitting. The
linearized flow in the spectral basis is instead advanced per Fourier mode by the matrix
exponential of the truncated generator L - iκS.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import exp

import numpy as np
from scipy.linalg import expm

from ..errors import ParameterError, ShapeError
from ..model import (
    ModelParams,
    PhaseField,
    bgk_gain,
    collocation_size,
    gaussian,
    local_maxwellian,
    transport_symbol,
    uniform_ness,
)
from ..spectral import Convention, SpectralBasis, collision_matrix, streaming_matrix


class Splitting(str, Enum):
    """Lie: transport then collision. Strang: half transport, collision, half transport."""

    Lie = "lie"
    Strang = "strang"


def step_transport(f: PhaseField, dt: float) -> PhaseField:
    """Exact free streaming: mode (k, v) picks up the phase e^{-2πikv·dt}."""
    return f.with_modes(f.modes * np.exp(-dt * transport_symbol(f.K, f.grid)))


def step_collision(f: PhaseField, params: ModelParams, dt: float) -> PhaseField:
    """Relaxation with the gain frozen at the substep start: f ← e^{-dt}f + (1 - e^{-dt})gain."""
    decay = exp(-dt)
    gain = bgk_gain(f, params)
    return f.with_modes(decay * f.modes + (1 - decay) * gain.modes)


def split_step(
    f: PhaseField, params: ModelParams, dt: float, scheme: Splitting | str = Splitting.Strang
) -> PhaseField:
    if Splitting(scheme) is Splitting.Lie:
        return step_collision(step_transport(f, dt), params, dt)

    f = step_transport(f, dt / 2)
    f = step_collision(f, params, dt)
    return step_transport(f, dt / 2)


def _linear_moments(h: PhaseField) -> tuple[np.ndarray, np.ndarray]:
    """σ and τ per Fourier mode: the 0th and 2nd velocity moments of h."""
    return h.grid.integrate(h.modes), h.grid.moment(h.modes, 2)


def _energy_profile(params: ModelParams, grid) -> np.ndarray:
    t_inf = params.t_inf
    return (grid.nodes**2 / t_inf - 1) * gaussian(grid.nodes, t_inf)


def linearized_collision(h: PhaseField, params: ModelParams) -> PhaseField:
    """L_α h = σ f∞ + (α/2)(τ/T∞ - σ)(v²/T∞ - 1)M_T∞ - h."""
    sigma, tau = _linear_moments(h)
    f_inf = uniform_ness(params, h.grid)
    energy = _energy_profile(params, h.grid)
    gain = np.outer(sigma, f_inf) + 0.5 * params.alpha * np.outer(
        tau / params.t_inf - sigma, energy
    )
    return h.with_modes(gain - h.modes)


def relax_linearized(h: PhaseField, params: ModelParams, dt: float) -> PhaseField:
    """Exact flow of ∂_t h = L_α h over dt.

    σ is conserved and τ - T∞σ decays at rate 1 - α, which makes the gain integrable in closed
    form.
    """
    sigma, tau = _linear_moments(h)
    f_inf = uniform_ness(params, h.grid)
    energy = _energy_profile(params, h.grid)

    decay = exp(-dt)
    slow = exp(-(1 - params.alpha) * dt)
    excess = (tau - params.t_inf * sigma) / (2 * params.t_inf)

    modes = (
        decay * h.modes
        + (1 - decay) * np.outer(sigma, f_inf)
        + (slow - decay) * np.outer(excess, energy)
    )
    return h.with_modes(modes)


@dataclass
class LinearPropagator:
    """exp((L - iκS)dt) for every mode |k| <= K, acting on coefficients of shape (2K+1, M)."""

    params: ModelParams
    basis: SpectralBasis
    dt: float
    K: int
    convention: Convention = Convention.Torus
    matrices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise ParameterError(f"Time step must be positive, got {self.dt}.")
        if self.params != self.basis.params:
            raise ParameterError("Basis was built for different model parameters.")

        self.convention = Convention(self.convention)
        S = streaming_matrix(self.basis)
        L = collision_matrix(self.basis)

        positive = np.stack(
            [
                expm((L - 1j * self.convention.frequency(k) * S) * self.dt)
                for k in range(self.K + 1)
            ]
        )
        # L and S are real, so mode -k evolves by the conjugate exponential.
        self.matrices = np.concatenate([positive[:0:-1].conj(), positive])

    @property
    def order(self) -> int:
        return self.basis.order

    def kappas(self) -> np.ndarray:
        return np.array([self.convention.frequency(k) for k in range(-self.K, self.K + 1)])

    def __call__(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs)
        if coeffs.shape != (2 * self.K + 1, self.order):
            raise ShapeError(
                f"Expected coefficients of shape {(2 * self.K + 1, self.order)}, "
                f"got {coeffs.shape}."
            )
        return np.einsum("kij,kj->ki", self.matrices, coeffs)


def step_linearized(
    h: PhaseField | np.ndarray,
    params: ModelParams,
    basis: SpectralBasis | None,
    dt: float,
    propagator: LinearPropagator | None = None,
    scheme: Splitting | str = Splitting.Strang,
) -> PhaseField | np.ndarray:
    """Advance the linearized equation ∂_t h + v∂_x h = L_α h by dt.

    Basis coefficients of shape (2K+1, M) go through the exact per-mode exponential; a
    PhaseField is stepped on the velocity grid by splitting exact transport and exact
    relaxation.
    """
    if isinstance(h, PhaseField):
        if Splitting(scheme) is Splitting.Lie:
            return relax_linearized(step_transport(h, dt), params, dt)
        h = step_transport(h, dt / 2)
        h = relax_linearized(h, params, dt)
        return step_transport(h, dt / 2)

    coeffs = np.asarray(h)
    if propagator is None:
        if basis is None:
            raise ParameterError("Stepping basis coefficients needs a basis or a propagator.")
        K = (coeffs.shape[0] - 1) // 2
        propagator = LinearPropagator(params, basis, dt, K)
    elif not np.isclose(propagator.dt, dt):
        raise ParameterError(f"Propagator was built for dt={propagator.dt}, not {dt}.")
    return propagator(coeffs)


def _collocation_moments(h: PhaseField) -> tuple[np.ndarray, np.ndarray]:
    values = h.values(collocation_size(h.K))
    return h.grid.integrate(values), h.grid.moment(values, 2)


def maxwellian_linearization(h: PhaseField, params: ModelParams) -> PhaseField:
    """First-order change of the local Maxwellian: σM_T∞ + ½(v²/T∞ - 1)M_T∞(τ/T∞ - σ)."""
    sigma, tau = _linear_moments(h)
    maxw = gaussian(h.grid.nodes, params.t_inf)
    energy = _energy_profile(params, h.grid)
    modes = np.outer(sigma, maxw) + 0.5 * np.outer(tau / params.t_inf - sigma, energy)
    return h.with_modes(modes)


def nonlinear_remainder(h: PhaseField, params: ModelParams) -> PhaseField:
    """R[h] = M_f - M_f∞ - (first-order term) for f = f∞ + h.

    The Maxwellians are evaluated without grid normalization so that R vanishes to second
    order in h.
    """
    grid = h.grid
    sigma, tau = _collocation_moments(h)
    rho = 1 + sigma
    temperature = (params.p_inf + tau) / rho

    local = local_maxwellian(rho, temperature, grid)
    reference = gaussian(grid.nodes, params.t_inf)
    remainder = PhaseField.from_values(local - reference, grid, h.K)
    return remainder - maxwellian_linearization(h, params)
