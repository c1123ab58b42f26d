"""Explicit hypocoercive decay rates and their numerical verification per Fourier mode."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import sqrt

import numpy as np
from tqdm.auto import tqdm

from ..errors import ParameterError
from ..log import LOG, dict_view
from ..model import ModelParams
from .basis import SpectralBasis, c_alpha
from .blocks import Convention, assemble_mode_block

EXTENSION = 8
"""Extra basis functions used to check that truncated spectra are stable."""


@dataclass
class ExplicitRate:
    """Decay ‖h_t‖ ≤ C e^{-λt}‖h_0‖ with the mixing parameter c of the Lyapunov matrices.

    `refined` is the rate that the Lyapunov inequality yields directly,
    2λ = √T∞ min{c, (1-α)/√T∞ - c c_α^{-2}}(1 - c).
    """

    C: float
    lam: float
    c: float
    case: int
    refined: float
    degenerate: bool = False

    def __iter__(self):
        yield from (self.C, self.lam, self.c)

    @property
    def certified(self) -> float:
        """Rate at which the Lyapunov matrices are certified, never above `lam`."""
        return min(self.lam, self.refined)

    def __rich__(self):
        return dict_view(asdict(self), title="Explicit rate")


def explicit_rate(params: ModelParams) -> ExplicitRate:
    alpha = params.alpha
    if alpha == 1:
        LOG.warning("No explicit rate at alpha=1: collisions conserve energy and λ = 0.")
        return ExplicitRate(C=4.0, lam=0.0, c=0.0, case=0, refined=0.0, degenerate=True)

    root_t = sqrt(params.t_inf)
    c_sq = c_alpha(params) ** 2
    test = c_sq * (1 - alpha) / (2 * root_t)
    c = min(0.5, test)

    if test < 0.5:
        case, lam = 1, (1 - alpha) / 8
    else:
        case, lam = 2, root_t / 8

    refined = 0.5 * root_t * min(c, (1 - alpha) / root_t - c / c_sq) * (1 - c)
    return ExplicitRate(C=4.0, lam=lam, c=c, case=case, refined=refined)


@dataclass
class GapResult:
    """Numerical spectral gap of mode k at truncation M, checked against M + 8."""

    k: int
    M: int
    convention: str
    gap: float
    gap_extended: float
    lambda_bound: float
    certified_rate: float
    certificate_min_eig: float

    @property
    def stable(self) -> bool:
        return abs(self.gap - self.gap_extended) <= 1e-6

    @property
    def gap_ok(self) -> bool:
        return self.gap >= self.lambda_bound

    @property
    def certificate_ok(self) -> bool:
        return self.certificate_min_eig >= -1e-8

    def row(self) -> dict:
        return {
            **asdict(self),
            "stable": self.stable,
            "gap_ok": self.gap_ok,
            "certificate_ok": self.certificate_ok,
        }


def _zero_mode_gap(block) -> tuple[float, float]:
    # Mode 0 keeps zero global mass and energy, so drop e_0 and e_2.
    keep = [m for m in range(block.order) if m not in (0, 2)]
    C = block.C[np.ix_(keep, keep)]
    form = C.conj().T + C
    return float(np.linalg.eigvals(C).real.min()), form


def numeric_gap(
    k: int,
    params: ModelParams,
    basis: SpectralBasis,
    M: int | None = None,
    rate: ExplicitRate | None = None,
    convention: Convention | str = Convention.Torus,
) -> GapResult:
    """Min real part of the spectrum of C_k truncated to M×M, plus the Lyapunov certificate.

    Needs a basis of at least M + 8 functions for the stability check.
    """
    M = M or basis.order - EXTENSION
    if basis.order < M + EXTENSION:
        raise ParameterError(f"Basis order {basis.order} too small to check M={M} against M+8.")

    rate = rate or explicit_rate(params)
    convention = Convention(convention)

    block = assemble_mode_block(k, params, basis, rate.c, convention, M=M)
    extended = assemble_mode_block(k, params, basis, rate.c, convention, M=M + EXTENSION)

    if k == 0:
        gap, form = _zero_mode_gap(block)
        gap_ext, _ = _zero_mode_gap(extended)
        certificate = float(np.linalg.eigvalsh(form).min()) - 2 * rate.certified
    else:
        gap, gap_ext = block.gap(), extended.gap()
        certificate = block.certificate(rate.certified)

    result = GapResult(
        k=k,
        M=M,
        convention=convention.value,
        gap=gap,
        gap_extended=gap_ext,
        lambda_bound=rate.lam,
        certified_rate=rate.certified,
        certificate_min_eig=certificate,
    )
    if not result.stable:
        LOG.warning(f"Gap of mode {k} not stable under truncation: {gap:.8f} vs {gap_ext:.8f}.")
    return result


def gap_table(
    params: ModelParams,
    basis: SpectralBasis,
    kmax: int = 8,
    M: int | None = None,
    convention: Convention | str = Convention.Torus,
    log: bool = False,
) -> list[GapResult]:
    """Gaps for k = 1..kmax (mode -k has the complex conjugate spectrum)."""
    rate = explicit_rate(params)
    ks = range(1, kmax + 1)
    return [
        numeric_gap(k, params, basis, M=M, rate=rate, convention=convention)
        for k in tqdm(ks, desc="Mode gaps", disable=not log)
    ]
