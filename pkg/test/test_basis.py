from math import sqrt

import numpy as np
import pytest

from bgkness.errors import ConditioningError, ParameterError, ShapeError
from bgkness.model import ModelParams, VelocityGrid
from bgkness.spectral import build_basis, c_alpha, streaming_matrix

from .utils import close, equal

SWEEP = [
    ModelParams(0.0, 1.0, 3.0),
    ModelParams(0.5, 1.0, 3.0),
    ModelParams(1.0, 1.0, 3.0),
    ModelParams(0.3, 0.5, 4.0),
    ModelParams(0.8, 2.0, 2.0),
]

M = 24


@pytest.fixture(scope="module", params=SWEEP, ids=str)
def sweep_basis(request):
    return build_basis(request.param, M=M)


def test_orthonormality(sweep_basis):
    assert close(sweep_basis.gram(), np.eye(M), atol=1e-8, extra=sweep_basis.params)


def test_low_order_functions(sweep_basis):
    basis = sweep_basis
    t_inf = basis.params.t_inf
    v = basis.grid.nodes
    assert np.array_equal(basis.values[0], basis.f_inf)
    assert close(basis.values[1], v * basis.f_inf / sqrt(t_inf), rtol=1e-8, atol=1e-12)

    c = c_alpha(basis.params)
    assert close(basis.values[2], c * (v**2 / t_inf - 1) * basis.f_inf, rtol=1e-8, atol=1e-12)


def test_recurrence(sweep_basis):
    basis = sweep_basis
    assert close(basis.recurrence[1], 1.0, rtol=1e-8)
    assert close(basis.recurrence[2], 1 / c_alpha(basis.params), rtol=1e-8)
    assert close(basis.c_alpha, c_alpha(basis.params), rtol=1e-8)
    assert np.all(basis.recurrence[1:] > 0)


def test_jacobi_matrix(sweep_basis):
    """Multiplication by v is the tridiagonal matrix of the recurrence."""
    basis = sweep_basis
    assert np.abs(basis.diagonal).max() <= 1e-10
    S = streaming_matrix(basis)
    assert np.array_equal(S, S.T)
    assert close(basis.streaming_quadrature(), S, atol=1e-8)


@pytest.mark.parametrize("alpha", np.linspace(0, 1, 6))
@pytest.mark.parametrize("temps", [(1.0, 1.0), (1.0, 3.0), (0.1, 1.9), (0.01, 5.0)])
def test_c_alpha_range(alpha, temps):
    inv_sq = c_alpha(ModelParams(alpha, *temps)) ** -2
    assert 2 - 1e-12 <= inv_sq <= 3 * (2 - alpha) - 1 + 1e-12


def test_c_alpha_equilibrium():
    assert close(c_alpha(ModelParams(1.0, 0.5, 4.0)) ** -2, 2.0, rtol=1e-14)
    assert close(c_alpha(ModelParams(0.3, 2.0, 2.0)) ** -2, 2.0, rtol=1e-14)


def test_narrow_grid():
    params = ModelParams(0.5, 1.0, 3.0)
    with pytest.raises(ConditioningError) as info:
        build_basis(params, VelocityGrid.uniform(4.0, 256), M=16)
    assert info.value.max_order < 16


def test_build_errors():
    with pytest.raises(ParameterError):
        build_basis(ModelParams(0.5, 1.0, 3.0), M=2)


def test_truncated(basis):
    small = basis.truncated(5)
    assert equal(small.order, 5)
    assert np.array_equal(small.values, basis.values[:5])
    assert equal(small.c_alpha, basis.c_alpha)

    with pytest.raises(ParameterError):
        basis.truncated(2)
    with pytest.raises(ParameterError):
        basis.truncated(basis.order + 1)


def test_project_synthesize(basis):
    coeffs = np.zeros(basis.order)
    coeffs[3] = 2.0
    profile = basis.synthesize(coeffs)
    assert close(profile, 2 * basis.values[3], rtol=1e-15)
    assert close(basis.project(profile), coeffs, atol=1e-8)

    with pytest.raises(ShapeError):
        basis.project(np.ones(basis.grid.size + 1))
    with pytest.raises(ShapeError):
        basis.synthesize(np.ones(basis.order - 1))
