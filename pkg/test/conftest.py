"""Shared, expensive objects.

Velocity grids and spectral bases are immutable after construction, so building them once per
session and sharing them between tests is safe.
"""
import pytest

from bgkness.model import ModelParams, VelocityGrid
from bgkness.spectral import build_basis


@pytest.fixture(scope="session")
def params():
    return ModelParams(alpha=0.5, t1=1.0, t2=3.0)


@pytest.fixture(scope="session")
def grid(params):
    return VelocityGrid.for_params(params, 512)


@pytest.fixture(scope="session")
def basis(params):
    """Order 16 basis for f∞ at (α, T1, T2) = (0.5, 1, 3)."""
    return build_basis(params, VelocityGrid.for_moments(params, 2 * 16 + 2), 16)
