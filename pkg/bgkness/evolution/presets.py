"""Initial perturbations h₀ with zero global mass, given by their basis coefficients."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
import rich.repr

from ..errors import ParameterError
from ..model import PhaseField
from ..spectral import SpectralBasis


@dataclass
@rich.repr.auto
class Perturbation(ABC):
    """Base class of perturbation presets, scaled by `amplitude`."""

    amplitude: float = 1.0

    @abstractmethod
    def coefficients(self, basis: SpectralBasis, K: int) -> np.ndarray:
        """Coefficients of shape (2K+1, M), conjugate symmetric in k."""

    def field(self, basis: SpectralBasis, K: int) -> PhaseField:
        return basis.synthesize_field(self.coefficients(basis, K))


class Presets:
    """Registry of perturbation presets, by lowercase class name."""

    PRESETS = {}

    @classmethod
    def register(cls, registered: type) -> type:
        cls.PRESETS[registered.__name__.lower()] = registered
        return registered

    @classmethod
    def get(cls, name: str, **kwds) -> Perturbation:
        try:
            preset = cls.PRESETS[name.lower()]
        except KeyError:
            raise ParameterError(
                f"Unknown perturbation preset '{name}'. Choose one of {sorted(cls.PRESETS)}."
            ) from None
        return preset(**kwds)


def _check_mode(k: int, K: int):
    if not 0 <= k <= K:
        raise ParameterError(f"Fourier mode {k} outside 0..{K}.")


@Presets.register
@dataclass
class Mode(Perturbation):
    """amplitude·g_m(v)·cos(2πkx)."""

    m: int = 2
    k: int = 1

    def coefficients(self, basis: SpectralBasis, K: int) -> np.ndarray:
        _check_mode(self.k, K)
        if not 0 <= self.m < basis.order:
            raise ParameterError(f"Basis index {self.m} outside 0..{basis.order - 1}.")
        if self.m == 0 and self.k == 0:
            raise ParameterError("g_0 at k=0 carries global mass.")

        coeffs = np.zeros((2 * K + 1, basis.order), dtype=complex)
        if self.k == 0:
            coeffs[K, self.m] = self.amplitude
        else:
            coeffs[K + self.k, self.m] = coeffs[K - self.k, self.m] = self.amplitude / 2
        return coeffs


@Presets.register
@dataclass
class Random(Perturbation):
    """Band-limited random perturbation with |k| <= kmax, normalized to `amplitude` in H_α.

    Coefficients decay like 2^{-m/2} in the basis index so that the velocity profile stays
    smooth.
    """

    seed: int = 0
    kmax: int = 4

    def coefficients(self, basis: SpectralBasis, K: int) -> np.ndarray:
        kmax = min(self.kmax, K)
        M = basis.order
        rng = np.random.default_rng(self.seed)

        profile = 2.0 ** (-np.arange(M) / 2)
        half = rng.standard_normal((kmax + 1, M)) + 1j * rng.standard_normal((kmax + 1, M))
        half *= profile
        half[0] = half[0].real
        half[0, 0] = 0.0

        coeffs = np.zeros((2 * K + 1, M), dtype=complex)
        coeffs[K : K + kmax + 1] = half
        coeffs[K - kmax : K] = half[:0:-1].conj()

        norm = np.linalg.norm(coeffs)
        return coeffs * (self.amplitude / norm)


@Presets.register
@dataclass
class Density(Perturbation):
    """σ(x) f∞ with σ = amplitude·cos(2πkx): a pure density perturbation."""

    k: int = 1

    def coefficients(self, basis: SpectralBasis, K: int) -> np.ndarray:
        if self.k == 0:
            raise ParameterError("A density preset at k=0 carries global mass.")
        return Mode(amplitude=self.amplitude, m=0, k=self.k).coefficients(basis, K)
