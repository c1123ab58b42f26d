"""Matrices of the linearized operator in the velocity basis, one block per Fourier mode.

For mode k the linearized equation reads ∂_t ĥ(k) = (L - iκS) ĥ(k) with S the Jacobi matrix of
multiplication by v and L = G - Id the collision matrix, whose gain part G has first column e_0
and third column b. The Lyapunov matrix P differs from the identity only in the top 2×2 block
[[1, -ic/κ], [ic/κ, 1]].
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import pi, sqrt

import numpy as np

from ..errors import ParameterError, ShapeError
from ..log import dict_view
from ..model import ModelParams, gaussian
from .basis import SpectralBasis


class Convention(str, Enum):
    """Frequency κ of mode k: 2πk on the unit torus, or k on a unit-circumference circle."""

    Torus = "torus"
    Circle = "circle"

    def frequency(self, k: int) -> float:
        return 2 * pi * k if self is Convention.Torus else float(k)


def streaming_matrix(basis: SpectralBasis) -> np.ndarray:
    """S with S[m-1, m] = S[m, m-1] = √T∞ a_m and zero diagonal."""
    off = sqrt(basis.params.t_inf) * basis.recurrence[1:]
    return np.diag(off, 1) + np.diag(off, -1)


def gain_column(basis: SpectralBasis) -> np.ndarray:
    """b_m = (α / 2c_α²) ∫ H_2 H_m M_T∞ dv by quadrature."""
    params = basis.params
    grid = basis.grid
    polys = basis.polynomials
    maxw = gaussian(grid.nodes, params.t_inf)
    scale = params.alpha / (2 * basis.c_alpha**2)
    return scale * grid.integrate(polys[2] * polys * maxw)


def collision_matrix(basis: SpectralBasis) -> np.ndarray:
    M = basis.order
    gain = np.zeros((M, M))
    gain[0, 0] = 1.0
    gain[:, 2] += gain_column(basis)
    return gain - np.eye(M)


def collision_apply(
    h_modes: np.ndarray, basis: SpectralBasis, params: ModelParams | None = None
) -> np.ndarray:
    """L applied to coefficient vectors stored along the last axis."""
    if params is not None and params != basis.params:
        raise ParameterError("Basis was built for different model parameters.")

    h_modes = np.asarray(h_modes)
    if h_modes.shape[-1] != basis.order:
        raise ShapeError(f"Expected {basis.order} coefficients, got {h_modes.shape[-1]}.")
    return h_modes @ collision_matrix(basis).T


def collision_norm(basis: SpectralBasis) -> float:
    return float(np.linalg.norm(collision_matrix(basis), 2))


def coercivity_check(
    h: np.ndarray, params: ModelParams, basis: SpectralBasis
) -> tuple[float, float]:
    """⟨h, L h⟩ and -((1 - α)/2)‖(I - Π_0)h‖²."""
    h = np.asarray(h)
    lhs = float(np.real(np.vdot(h, collision_apply(h, basis, params))))
    rhs = -0.5 * (1 - params.alpha) * float(np.sum(np.abs(h[1:]) ** 2))
    return lhs, rhs


@dataclass
class CoercivityReport:
    alpha: float
    samples: int
    max_excess: float
    """Largest ⟨h, L h⟩ - rhs over the corpus, nonpositive when coercivity holds."""
    min_rate: float
    """Smallest -⟨h, L h⟩ / ‖(I - Π_0)h‖², the measured microscopic coercivity constant."""

    @property
    def holds(self) -> bool:
        return self.max_excess <= 1e-9

    def __rich__(self):
        return dict_view({**self.__dict__, "holds": self.holds}, title="Coercivity")


def coercivity_corpus(
    params: ModelParams, basis: SpectralBasis, samples: int = 10_000, seed: int = 0
) -> CoercivityReport:
    """Coercivity over random vectors; half of them concentrated on the first few modes."""
    rng = np.random.default_rng(seed)
    M = basis.order
    corpus = rng.standard_normal((samples, M))
    corpus[: samples // 2, 4:] *= 1e-2

    L = collision_matrix(basis)
    lhs = np.einsum("si,ij,sj->s", corpus, L, corpus)
    micro = np.sum(corpus[:, 1:] ** 2, axis=1)
    rhs = -0.5 * (1 - params.alpha) * micro
    return CoercivityReport(
        alpha=params.alpha,
        samples=samples,
        max_excess=float(np.max(lhs - rhs)),
        min_rate=float(np.min(-lhs / micro)),
    )


def quadratic_form_gap(alpha: float) -> float:
    """Greatest eigenvalue of (α-1)V₁² - V₂² + √(1-α²) V₁V₂."""
    if not 0 <= alpha <= 1:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}.")
    off = sqrt(1 - alpha**2) / 2
    form = np.array([[alpha - 1, off], [off, -1.0]])
    return float(np.linalg.eigvalsh(form).max())


def mco_roots(alpha: float) -> np.ndarray:
    """Roots of X² + (2-α)X + (1-α)(3-α)/4, i.e. (α-1)/2 and (α-3)/2, descending."""
    roots = np.roots([1.0, 2 - alpha, (1 - alpha) * (3 - alpha) / 4])
    return np.sort(roots.real)[::-1]


@dataclass
class ModeBlock:
    k: int
    kappa: float
    c: float
    S: np.ndarray
    L: np.ndarray
    C: np.ndarray
    P: np.ndarray

    @property
    def order(self) -> int:
        return self.S.shape[0]

    def dissipation_form(self) -> np.ndarray:
        """C*P + PC."""
        return self.C.conj().T @ self.P + self.P @ self.C

    def dissipation_remainder(self) -> np.ndarray:
        """R = C*P + PC - (2Id - G - Gᵀ), with G = L + Id the gain matrix."""
        return self.dissipation_form() + self.L + self.L.T

    def certificate(self, lam: float) -> float:
        """Smallest eigenvalue of C*P + PC - 2λP; nonnegative certifies decay at rate λ."""
        form = self.dissipation_form() - 2 * lam * self.P
        return float(np.linalg.eigvalsh((form + form.conj().T) / 2).min())

    def equivalence(self) -> np.ndarray:
        """Eigenvalues of P, ascending."""
        return np.linalg.eigvalsh(self.P)

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvals(self.C)

    def gap(self) -> float:
        return float(self.spectrum().real.min())

    def __rich__(self):
        return dict_view(
            {"k": self.k, "kappa": self.kappa, "c": self.c, "M": self.order, "gap": self.gap()},
            title="Mode block",
        )


def assemble_mode_block(
    k: int,
    params: ModelParams,
    basis: SpectralBasis,
    c: float,
    convention: Convention | str = Convention.Torus,
    M: int | None = None,
) -> ModeBlock:
    """Blocks S, L, C_k = -(L - iκS) and P_k for Fourier mode k.

    Mode 0 has no streaming; its block is C = -L with P = Id. The mixing parameter lies in
    (0, 1), except c = 0 which `explicit_rate` returns at α = 1, where no decay rate is certified
    and P_k = Id.
    """
    if not 0 <= c < 1:
        raise ParameterError(f"Mixing parameter c must lie in (0, 1), or be 0 at α = 1; got {c}.")
    if params != basis.params:
        raise ParameterError("Basis was built for different model parameters.")

    if M is not None:
        basis = basis.truncated(M)

    kappa = Convention(convention).frequency(k)
    S = streaming_matrix(basis)
    L = collision_matrix(basis)
    C = -(L - 1j * kappa * S)

    P = np.eye(basis.order, dtype=complex)
    if k != 0:
        P[0, 1] = -1j * c / kappa
        P[1, 0] = 1j * c / kappa

    return ModeBlock(k=k, kappa=kappa, c=c, S=S, L=L, C=C, P=P)
