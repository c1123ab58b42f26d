"""Orthonormal velocity basis g_m = H_m f∞ generated from v^m f∞ by Stieltjes' procedure.

Orthonormality is with respect to ⟨g, h⟩ = ∫ g h / f∞ dv, i.e. the polynomials H_m are
orthonormal for the discrete measure w_i f∞(v_i) of the velocity grid. Multiplication by v is
then the symmetric tridiagonal (Jacobi) matrix with off-diagonal √T∞ a_m.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from ..errors import ConditioningError, ParameterError, ShapeError
from ..log import LOG, dict_view
from ..model import ModelParams, PhaseField, VelocityGrid, ness_moment, uniform_ness


def c_alpha(params: ModelParams) -> float:
    """Normalization of H_2 = c_α (v²/T∞ - 1), from c_α^{-2} = 3(α + (1-α)(2 - T1T2/T∞²)) - 1."""
    ratio = params.t1 * params.t2 / params.t_inf**2
    inv_sq = 3 * (params.alpha + (1 - params.alpha) * (2 - ratio)) - 1
    return 1 / sqrt(inv_sq)


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    params: ModelParams
    grid: VelocityGrid
    values: np.ndarray
    """g_m at the velocity nodes, shape (M, n_velocity)."""
    recurrence: np.ndarray
    """a_1..a_{M-1}, stored with a leading 0 so that `recurrence[m]` is a_m."""
    diagonal: np.ndarray
    """Diagonal Jacobi coefficients ⟨v g_m, g_m⟩, zero up to round-off by evenness of f∞."""
    f_inf: np.ndarray

    @property
    def order(self) -> int:
        return self.values.shape[0]

    @property
    def c_alpha(self) -> float:
        return 1 / self.recurrence[2]

    @property
    def polynomials(self) -> np.ndarray:
        return self.values / self.f_inf

    def truncated(self, M: int) -> SpectralBasis:
        if not 3 <= M <= self.order:
            raise ParameterError(f"Can truncate to 3..{self.order} basis functions, not {M}.")
        return SpectralBasis(
            self.params,
            self.grid,
            self.values[:M],
            self.recurrence[:M],
            self.diagonal[:M],
            self.f_inf,
        )

    def project(self, profiles: np.ndarray) -> np.ndarray:
        """Coefficients ∫ h g_m / f∞ dv over the last axis, shape (..., M)."""
        profiles = np.asarray(profiles)
        if profiles.shape[-1] != self.grid.size:
            raise ShapeError(
                f"Expected {self.grid.size} velocity values, got {profiles.shape[-1]}."
            )
        return (profiles * (self.grid.weights / self.f_inf)) @ self.values.T

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        coeffs = np.asarray(coeffs)
        if coeffs.shape[-1] != self.order:
            raise ShapeError(f"Expected {self.order} basis coefficients, got {coeffs.shape[-1]}.")
        return coeffs @ self.values

    def project_field(self, h: PhaseField) -> np.ndarray:
        """Basis coefficients per Fourier mode, shape (2K+1, M)."""
        self.grid.check(h.grid)
        return self.project(h.modes)

    def synthesize_field(self, coeffs: np.ndarray) -> PhaseField:
        return PhaseField(self.synthesize(coeffs), self.grid)

    def gram(self) -> np.ndarray:
        return self.project(self.values)

    def streaming_quadrature(self) -> np.ndarray:
        """⟨v g_m, g_n⟩ by quadrature, for comparison with the recurrence."""
        return self.project(self.values * self.grid.nodes)

    def __rich__(self):
        return dict_view(
            {
                "order": self.order,
                "c_alpha": self.c_alpha,
                "a": self.recurrence[1:6],
                "max_diagonal": np.abs(self.diagonal).max(),
            },
            title="Spectral basis",
        )


def resolved_order(params: ModelParams, grid: VelocityGrid, max_order: int, rtol: float) -> int:
    """Largest even order up to `max_order` whose f∞ moments the grid reproduces to `rtol`."""
    f_inf = uniform_ness(params, grid)
    resolved = 0
    for order in range(2, max_order + 1, 2):
        exact = ness_moment(params, order)
        discrete = float(grid.moment(f_inf, order))
        if abs(discrete - exact) > rtol * exact:
            break
        resolved = order
    return resolved


def build_basis(
    params: ModelParams,
    grid: VelocityGrid | None = None,
    M: int = 24,
    rtol: float = 1e-8,
) -> SpectralBasis:
    """Stieltjes procedure on the grid measure w_i f∞(v_i), with one reorthogonalization pass.

    Without a grid, one is built wide enough for moments up to order 2M + 2.
    """
    if M < 3:
        raise ParameterError(f"Need at least 3 basis functions, got {M}.")

    grid = grid or VelocityGrid.for_moments(params, 2 * M + 2)
    resolved = resolved_order(params, grid, 2 * M + 2, rtol)
    if resolved < 2 * M + 2:
        cap = max(resolved - 2, 0) // 2
        raise ConditioningError(
            f"Velocity grid resolves f∞ moments only up to order {resolved}; "
            f"use M <= {cap} or a wider grid.",
            max_order=cap,
        )

    v = grid.nodes
    f_inf = uniform_ness(params, grid)
    measure = grid.weights * f_inf

    polys = np.zeros((M, grid.size))
    beta = np.zeros(M)
    diagonal = np.zeros(M)
    polys[0] = 1.0

    for m in range(M - 1):
        q = v * polys[m]
        diagonal[m] = measure @ (q * polys[m])
        q = q - diagonal[m] * polys[m]
        if m:
            q = q - beta[m] * polys[m - 1]
        q = q - polys[: m + 1].T @ (polys[: m + 1] @ (measure * q))

        norm = sqrt(measure @ q**2)
        if not norm > 1e-10 * sqrt(measure @ (v * polys[m]) ** 2):
            raise ConditioningError(
                f"Basis lost independence at order {m + 1}; use M <= {m}.", max_order=m
            )
        beta[m + 1] = norm
        polys[m + 1] = q / norm

    diagonal[M - 1] = measure @ (v * polys[M - 1] ** 2)

    basis = SpectralBasis(
        params=params,
        grid=grid,
        values=polys * f_inf,
        recurrence=beta / sqrt(params.t_inf),
        diagonal=diagonal,
        f_inf=f_inf,
    )
    LOG.debug(f"Built spectral basis with M={M} on {grid.size} velocity nodes.")
    return basis
