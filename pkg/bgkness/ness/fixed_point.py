"""Picard iteration of Ψ_α and measurement of its contraction factor."""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from tqdm.auto import tqdm

from ..errors import DomainError, ParameterError
from ..log import LOG, dict_view
from ..model import (
    DensityProfile,
    ModelParams,
    VelocityGrid,
    collocation_size,
    from_grid,
    local_maxwellian,
    reservoir_mix,
    to_grid,
)
from ..transforms import resolvent_symbol
from ..utils import trailing_ratio
from .maps import psi_map


@dataclass
class FixedPointReport:
    """Iterates ρ_0, ρ_1, ... and the residuals ‖ρ_{n+1} - ρ_n‖ of a Picard iteration."""

    iterates: list[DensityProfile]
    residuals: list[float]
    contraction_ratios: list[float]
    converged: bool
    tol: float

    @property
    def final_density(self) -> DensityProfile:
        return self.iterates[-1]

    @property
    def iterations(self) -> int:
        """Number of steps before the residual fell below tolerance."""
        return max(len(self.residuals) - 1, 0) if self.converged else len(self.residuals)

    @property
    def ratio(self) -> float:
        """Trailing geometric mean of the contraction ratios over the last 10 steps."""
        return trailing_ratio(self.residuals)

    def distance_to_constant(self) -> float:
        final = self.final_density
        return final.distance(DensityProfile.constant(final.K, final.mean))

    def __rich__(self):
        return dict_view(
            {
                "converged": self.converged,
                "iterations": self.iterations,
                "last_residual": self.residuals[-1] if self.residuals else 0.0,
                "ratio": self.ratio,
                "distance_to_constant": self.distance_to_constant(),
            },
            title="Fixed point",
        )


def check_admissible(rho: DensityProfile, atol: float = 1e-10):
    if abs(rho.mean - 1) > atol:
        raise ParameterError(f"Initial density must have mean 1, got {rho.mean}.")
    if rho.minimum() <= 0:
        raise DomainError("Initial density is not positive.", step=0, minimum=rho.minimum())


def iterate_fixed_point(
    rho0: DensityProfile,
    params: ModelParams,
    grid: VelocityGrid,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    log: bool = False,
) -> FixedPointReport:
    """Iterate ρ_{n+1} = Ψ_α[ρ_n] until ‖ρ_{n+1} - ρ_n‖_{L²} < tol."""
    check_admissible(rho0)

    iterates = [rho0]
    residuals = []
    ratios = []
    converged = False

    rho = rho0
    for step in tqdm(range(max_iter), desc="Picard", disable=not log):
        try:
            new = psi_map(rho, params, grid)
        except DomainError as exc:
            raise DomainError(f"Iterate {step}: {exc}", step=step, minimum=exc.minimum) from exc

        res = new.distance(rho)
        if residuals and residuals[-1] > 0:
            ratios.append(res / residuals[-1])
        residuals.append(res)
        iterates.append(new)
        rho = new

        if res < tol:
            converged = True
            break

    report = FixedPointReport(iterates, residuals, ratios, converged, tol)
    if not converged:
        LOG.warning(f"Picard iteration did not converge in {max_iter} steps ({residuals[-1]:.3e}).")
    return report


def _real_basis(K: int) -> np.ndarray:
    """Orthonormal real coordinates of zero-mean profiles, as centered modes (2K+1, 2K).

    Column 2(k-1) holds the mode pair of √2 cos(2πkx), column 2(k-1)+1 that of √2 sin(2πkx).
    """
    basis = np.zeros((2 * K + 1, 2 * K), dtype=complex)
    for k in range(1, K + 1):
        basis[K + k, 2 * (k - 1)] = basis[K - k, 2 * (k - 1)] = 1 / np.sqrt(2)
        basis[K + k, 2 * k - 1] = -1j / np.sqrt(2)
        basis[K - k, 2 * k - 1] = 1j / np.sqrt(2)
    return basis


def _real_coordinates(modes: np.ndarray, K: int) -> np.ndarray:
    """Inverse of `_real_basis` on zero-mean profiles (columns of `modes`)."""
    positive = modes[K + 1 :]
    coords = np.empty((2 * K,) + modes.shape[1:])
    coords[0::2] = np.sqrt(2) * positive.real
    coords[1::2] = -np.sqrt(2) * positive.imag
    return coords


def density_jacobian(
    rho_bar: DensityProfile, params: ModelParams, grid: VelocityGrid, chunk: int = 16
) -> np.ndarray:
    """Real 2K×2K matrix of DΨ_α[ρ̄] on zero-mean perturbations.

    DΨ_α[ρ̄]σ = ∫ (1 - v²∂_x²)^{-1} [α σ N(1 + ρ̄(⟨v²⟩_N - v²)/(2P∞)) + (1 - α) σ G] dv, where
    N is the local Maxwellian at temperature P∞/ρ̄ normalized on the grid, as in `psi_map`, and
    ⟨v²⟩_N its quadrature second moment. The matrix is exact for the discretized map.
    """
    K = rho_bar.K
    n = collocation_size(K)
    rho = rho_bar.values(n)
    if rho.min() <= 0:
        raise DomainError("Linearization point is not positive.", minimum=float(rho.min()))

    v = grid.nodes[None, :]
    p_inf = params.p_inf
    maxw = local_maxwellian(np.ones_like(rho), p_inf / rho, grid, normalize=True)
    second = grid.moment(maxw, 2)[:, None]
    weight = params.alpha * maxw * (1 + rho[:, None] * (second - v**2) / (2 * p_inf))
    weight = weight + (1 - params.alpha) * reservoir_mix(params, grid)[None, :]
    symbol = resolvent_symbol(K, grid)

    basis = _real_basis(K)
    columns = []
    for start in range(0, 2 * K, chunk):
        sigma = to_grid(basis[:, start : start + chunk], n)
        forced = from_grid(sigma[:, :, None] * weight[:, None, :], K)
        marginal = grid.integrate(forced * symbol[:, None, :])
        columns.append(_real_coordinates(marginal, K))

    return np.concatenate(columns, axis=1)


@dataclass
class NormEstimate:
    """Power-iteration estimate of an operator norm, with the error bar of its last step."""

    value: float
    error: float
    iterations: int
    converged: bool
    reference: float = float("nan")

    def __float__(self) -> float:
        return self.value


def operator_norm(
    matrix: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 1_000,
    seed: int = 0,
) -> NormEstimate:
    """Largest singular value by power iteration on AᵀA; the SVD value is kept as reference."""
    reference = float(np.linalg.norm(matrix, 2)) if matrix.size else 0.0
    if not matrix.size or not np.any(matrix):
        return NormEstimate(0.0, 0.0, 0, True, reference)

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(matrix.shape[1])
    x /= np.linalg.norm(x)

    value = error = 0.0
    for i in range(1, max_iter + 1):
        y = matrix.T @ (matrix @ x)
        norm = np.linalg.norm(y)
        if norm == 0:
            return NormEstimate(0.0, 0.0, i, True, reference)
        estimate = np.sqrt(norm)
        error = abs(estimate - value)
        value = estimate
        x = y / norm
        if error <= tol * value:
            return NormEstimate(float(value), float(error), i, True, reference)

    LOG.warning(f"Power iteration stopped at {max_iter} steps, error bar {error:.2e}.")
    return NormEstimate(float(value), float(error), max_iter, False, reference)


def contraction_norm_estimate(
    rho_bar: DensityProfile,
    params: ModelParams,
    grid: VelocityGrid,
    tol: float = 1e-10,
    max_iter: int = 1_000,
    seed: int = 0,
) -> NormEstimate:
    """L² operator norm of DΨ_α[ρ̄] restricted to zero-mean perturbations."""
    jacobian = density_jacobian(rho_bar, params, grid)
    return operator_norm(jacobian, tol=tol, max_iter=max_iter, seed=seed)


@dataclass
class AlphaSweep:
    """Contraction factors at ρ̄ ≡ 1 along a sequence of couplings.

    `bracket` is an empirical estimate of where the factor first reaches 1, not a proven threshold.
    """

    alphas: list[float]
    norms: list[float]
    errors: list[float] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.norms) >= 0))

    @property
    def bracket(self) -> tuple[float, float | None]:
        below = [a for a, n in zip(self.alphas, self.norms) if n < 1]
        above = [a for a, n in zip(self.alphas, self.norms) if n >= 1]
        lower = max(below) if below else 0.0
        upper = min((a for a in above if a > lower), default=None)
        return lower, upper

    def __rich__(self):
        return dict_view(
            {
                "alphas": np.array(self.alphas),
                "norms": np.array(self.norms),
                "bracket": self.bracket,
            },
            title="Contraction sweep",
        )


def alpha_sweep(
    params: ModelParams,
    grid: VelocityGrid,
    alphas: Sequence[float] = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5),
    K: int = 16,
    log: bool = False,
) -> AlphaSweep:
    rho_bar = DensityProfile.constant(K)
    norms, errors = [], []
    for alpha in tqdm(alphas, desc="Alpha sweep", disable=not log):
        estimate = contraction_norm_estimate(rho_bar, params.replace(alpha=alpha), grid)
        norms.append(estimate.value)
        errors.append(estimate.error)
    return AlphaSweep(list(alphas), norms, errors)
