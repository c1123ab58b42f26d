"""Truncated Fourier series on the unit torus [-1/2, 1/2).

Coefficients are stored centered, index `K + k` holding mode k ∈ {-K..K}, with the convention
r(x) = Σ_k r̂_k e^{2πikx}. Grid transforms go through scipy's real FFTs, so that values
reconstructed from coefficients are real and coefficients computed from real values are exactly
conjugate symmetric.
"""
from __future__ import annotations

import numpy as np
from scipy import fft

from ..errors import ShapeError


def wavenumbers(K: int) -> np.ndarray:
    return np.arange(-K, K + 1)


def truncation_order(modes: np.ndarray) -> int:
    size = np.shape(modes)[0]
    if size % 2 == 0:
        raise ShapeError(f"Need an odd number (2K+1) of Fourier modes, got {size}.")
    return (size - 1) // 2


def sobolev_weights(K: int) -> np.ndarray:
    """Multipliers 1 + (2πk)² of the H¹ norm."""
    return 1.0 + (2 * np.pi * wavenumbers(K)) ** 2


def collocation_size(K: int) -> int:
    """Number of collocation points, leaving room for cubic-type aliasing."""
    return max(4 * K, 4)


def collocation_points(n: int) -> np.ndarray:
    return -0.5 + np.arange(n) / n


def _signs(K: int, ndim: int) -> np.ndarray:
    # Grid starts at x = -1/2, which shifts mode k by e^{-iπk}.
    signs = np.where(np.arange(K + 1) % 2, -1.0, 1.0)
    return signs.reshape((-1,) + (1,) * (ndim - 1))


def to_grid(modes: np.ndarray, n: int | None = None) -> np.ndarray:
    """Real values at the `n` collocation points from centered coefficients (axis 0)."""
    modes = np.asarray(modes)
    K = truncation_order(modes)
    n = n or collocation_size(K)
    if n < 2 * K + 1:
        raise ShapeError(f"{n} collocation points cannot represent {2 * K + 1} modes.")

    half = np.zeros((n // 2 + 1,) + modes.shape[1:], dtype=complex)
    half[: K + 1] = modes[K:] * _signs(K, modes.ndim)
    return fft.irfft(half, n=n, axis=0) * n


def from_grid(values: np.ndarray, K: int) -> np.ndarray:
    """Centered coefficients of modes |k| <= K from real values at collocation points."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 2 * K + 1:
        raise ShapeError(f"{n} collocation points cannot resolve {2 * K + 1} modes.")

    half = fft.rfft(values, axis=0)[: K + 1] / n
    half = half * _signs(K, values.ndim)
    return np.concatenate([np.conj(half[:0:-1]), half], axis=0)


def is_hermitian(modes: np.ndarray, atol: float = 0.0) -> bool:
    """Reality check: mode -k is the complex conjugate of mode k."""
    modes = np.asarray(modes)
    return bool(np.allclose(modes[::-1], np.conj(modes), rtol=0.0, atol=atol))
