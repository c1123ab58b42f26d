from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers, sampled_from

from bgkness.errors import DomainError, ParameterError
from bgkness.model import (
    DensityProfile,
    ModelParams,
    PhaseField,
    VelocityGrid,
    compute_moments,
    conpres_diagnostics,
    maxwellian,
    reservoir_mix,
    uniform_ness,
)
from bgkness.ness import (
    alpha_sweep,
    contraction_norm_estimate,
    density_jacobian,
    forcing,
    iterate_fixed_point,
    local_maxwellian_of_density,
    ness_residual,
    operator_norm,
    psi_map,
    reconstruct_ness,
    resolvent_marginal,
    resolvent_marginal_quad,
)

from .utils import close

K = 8

PARAMS = [
    ModelParams(0.0, 1.0, 3.0),
    ModelParams(0.05, 1.0, 3.0),
    ModelParams(0.3, 0.5, 2.0),
    ModelParams(1.0, 1.0, 3.0),
]

SMALL_ALPHAS = (0.01, 0.05, 0.1)


def grid_for(params):
    return VelocityGrid.for_params(params)


def real_coordinates(profile: DensityProfile) -> np.ndarray:
    """Coordinates in the orthonormal basis √2 cos(2πkx), √2 sin(2πkx), k = 1..K."""
    positive = profile.modes[profile.K + 1 :]
    coords = np.empty(2 * profile.K)
    coords[0::2] = sqrt(2) * positive.real
    coords[1::2] = -sqrt(2) * positive.imag
    return coords


@pytest.mark.parametrize("params", PARAMS)
def test_constant_density_maxwellian(params):
    grid = grid_for(params)
    maxw = local_maxwellian_of_density(DensityProfile.constant(K), params, grid)
    expected = maxwellian(params.t_inf, grid)
    assert close(maxw.values(), np.broadcast_to(expected, maxw.values().shape), atol=1e-12)
    assert close(compute_moments(maxw).pressure.values(), params.p_inf, rtol=1e-10)


def test_maxwellian_constant_pressure():
    params = ModelParams(0.5, 1.0, 3.0)
    rho = DensityProfile.from_cosines(K, {1: 0.1})
    moments = compute_moments(local_maxwellian_of_density(rho, params, grid_for(params)))
    assert close(moments.pressure.values(), 2.0, atol=1e-8)
    assert close(moments.rho.modes, rho.modes, atol=1e-12)


def test_maxwellian_negative_density():
    params = ModelParams(0.5, 1.0, 3.0)
    rho = DensityProfile.from_cosines(K, {2: 1.2})
    with pytest.raises(DomainError):
        local_maxwellian_of_density(rho, params, grid_for(params))


def test_forcing():
    params = ModelParams(0.0, 1.0, 3.0)
    grid = grid_for(params)
    rho = DensityProfile.from_cosines(K, {1: 0.4, 3: 0.1})
    mixture = PhaseField.product(rho, reservoir_mix(params, grid), grid)
    assert np.array_equal(forcing(rho, params, grid).modes, mixture.modes)

    one = params.replace(alpha=1.0)
    uniform = forcing(DensityProfile.constant(K), one, grid)
    assert close(uniform.mode(0), maxwellian(2.0, grid), atol=1e-13)

    mixed = params.replace(alpha=0.6)
    f = forcing(rho, mixed, grid)
    assert close(f.mass(), 1.0, atol=1e-10)
    assert close(f.modes, f.modes[:, ::-1], atol=1e-15)


@pytest.mark.parametrize("params", PARAMS)
def test_uniform_fixed_point(params):
    grid = grid_for(params)
    image = psi_map(DensityProfile.constant(K), params, grid)
    assert close(image.modes, DensityProfile.constant(K).modes, atol=1e-10)

    f = reconstruct_ness(DensityProfile.constant(K), params, grid)
    f_inf = PhaseField.uniform(uniform_ness(params, grid), grid, K)
    assert close(f.modes, f_inf.modes, atol=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_single_mode_multiplier(k):
    """At α = 0 the map is linear and diagonal: mode k is scaled by γ_k."""
    params = ModelParams(0.0, 1.0, 3.0)
    grid = grid_for(params)
    eps = 0.2
    image = psi_map(DensityProfile.from_cosines(K, {k: eps}), params, grid)

    gamma = resolvent_marginal(reservoir_mix(params, grid), k, grid)
    expected = DensityProfile.from_cosines(K, {k: eps * gamma})
    assert close(image.modes, expected.modes, atol=1e-12)


def test_multiplier_quadrature():
    params = ModelParams(0.0, 1.0, 3.0)
    grid = grid_for(params)
    gamma = resolvent_marginal(reservoir_mix(params, grid), 1, grid)
    assert close(gamma, resolvent_marginal_quad(params, 1), rtol=1e-7)
    assert 0 < gamma < 1


def test_linearity_without_coupling():
    params = ModelParams(0.0, 1.0, 3.0)
    grid = grid_for(params)
    rho1 = DensityProfile.random(K, seed=1)
    rho2 = DensityProfile.random(K, seed=2)
    a = 0.3
    lhs = psi_map(a * rho1 + (1 - a) * rho2, params, grid)
    rhs = a * psi_map(rho1, params, grid) + (1 - a) * psi_map(rho2, params, grid)
    assert close(lhs.modes, rhs.modes, atol=1e-12)


@given(seed=integers(0, 10_000), alpha=sampled_from([0.0, 0.3, 0.7, 1.0]))
@settings(max_examples=30, deadline=None)
def test_psi_map_probability(seed, alpha):
    params = ModelParams(alpha, 1.0, 3.0)
    image = psi_map(DensityProfile.random(K, seed=seed, spread=0.9), params, grid_for(params))
    assert close(image.mean, 1.0, atol=1e-10)
    assert image.is_real(1e-14)
    assert image.minimum(256) >= -1e-9


def test_reconstruction_parity():
    params = ModelParams(0.3, 1.0, 3.0)
    grid = grid_for(params)
    rho = DensityProfile.from_cosines(K, {1: 0.2})
    f = reconstruct_ness(rho, params, grid)

    odd = 0.5 * (f.modes - f.modes[:, ::-1])
    assert np.abs(odd).max() > 0
    assert close(grid.integrate(odd), 0.0, atol=1e-14)
    # The odd part carries no mass, so the density is the image of ρ under Ψ.
    assert close(f.density().modes, psi_map(rho, params, grid).modes, atol=1e-13)


def test_iterate_from_constant():
    params = ModelParams(0.3, 1.0, 3.0)
    report = iterate_fixed_point(DensityProfile.constant(K), params, grid_for(params))
    assert report.converged
    assert report.iterations == 0
    assert report.distance_to_constant() < 1e-12


def test_picard_ratio_without_coupling():
    params = ModelParams(0.0, 1.0, 3.0)
    rho0 = DensityProfile.from_cosines(K, {1: 0.3})
    report = iterate_fixed_point(rho0, params, grid_for(params), tol=1e-12, max_iter=200)

    assert report.converged
    assert report.distance_to_constant() < 1e-12
    gamma = resolvent_marginal_quad(params, 1)
    assert close(np.median(report.contraction_ratios[:5]), gamma, atol=1e-4)
    assert all(r >= 0 for r in report.residuals)


def test_iterate_small_coupling():
    params = ModelParams(0.05, 1.0, 3.0)
    grid = grid_for(params)
    report = iterate_fixed_point(DensityProfile.from_cosines(K, {1: 0.3}), params, grid)
    assert report.converged
    assert report.residuals[-1] < report.tol
    assert report.distance_to_constant() < 1e-10

    f = reconstruct_ness(report.final_density, params, grid)
    pressure_dev, momentum_sup = conpres_diagnostics(f, params)
    assert pressure_dev <= 1e-7
    assert momentum_sup <= 1e-7
    assert ness_residual(f, params) <= 1e-8


@pytest.mark.parametrize("alpha", SMALL_ALPHAS)
def test_small_coupling_uniqueness(alpha):
    """Random positive starting densities all converge to the constant density."""
    params = ModelParams(alpha, 1.0, 3.0)
    grid = grid_for(params)
    for seed in range(20):
        rho0 = DensityProfile.random(K, seed=seed, spread=0.8)
        report = iterate_fixed_point(rho0, params, grid, tol=1e-12)
        assert report.converged, seed
        assert report.distance_to_constant() < 1e-10, seed


def test_iterate_errors():
    params = ModelParams(0.05, 1.0, 3.0)
    grid = grid_for(params)
    with pytest.raises(ParameterError):
        iterate_fixed_point(DensityProfile.constant(K, 2.0), params, grid)
    with pytest.raises(DomainError) as info:
        iterate_fixed_point(DensityProfile.from_cosines(K, {1: 1.5}), params, grid)
    assert info.value.step == 0

    report = iterate_fixed_point(DensityProfile.from_cosines(K, {1: 0.3}), params, grid, max_iter=2)
    assert not report.converged
    assert len(report.residuals) == 2


def test_contraction_norm_without_coupling():
    params = ModelParams(0.0, 1.0, 3.0)
    grid = grid_for(params)
    estimate = contraction_norm_estimate(DensityProfile.constant(K), params, grid)

    assert estimate.converged
    gamma = resolvent_marginal(reservoir_mix(params, grid), 1, grid)
    assert close(estimate.value, gamma, atol=1e-6)
    assert close(estimate.value, resolvent_marginal_quad(params, 1), atol=1e-6)
    assert close(estimate.value, estimate.reference, rtol=1e-8)
    assert estimate.value < 1


@pytest.mark.parametrize(
    "velocity_grid",
    [VelocityGrid.for_params(ModelParams(0.5, 1.0, 3.0)), VelocityGrid.uniform(4.0, 33)],
    ids=["wide", "narrow"],
)
def test_jacobian_finite_difference(velocity_grid):
    """On a narrow grid the normalization of the local Maxwellian matters to the derivative."""
    params = ModelParams(0.5, 1.0, 3.0)
    rho_bar = DensityProfile.from_cosines(K, {1: 0.2, 2: -0.1})
    jacobian = density_jacobian(rho_bar, params, velocity_grid)

    # Column 2 is the direction √2 cos(4πx).
    sigma = DensityProfile.from_cosines(K, {2: sqrt(2)}, mean=0.0)
    eps = 1e-5
    plus = psi_map(rho_bar + eps * sigma, params, velocity_grid)
    minus = psi_map(rho_bar - eps * sigma, params, velocity_grid)
    derivative = real_coordinates((plus - minus) * (1 / (2 * eps)))
    assert close(jacobian[:, 2], derivative, atol=1e-8)


def test_operator_norm():
    rng = np.random.default_rng(0)
    matrix = rng.standard_normal((6, 6))
    estimate = operator_norm(matrix)
    assert close(estimate.value, np.linalg.norm(matrix, 2), rtol=1e-8)
    assert float(operator_norm(np.zeros((3, 3)))) == 0.0


def test_alpha_sweep():
    params = ModelParams(0.0, 1.0, 3.0)
    grid = VelocityGrid.for_params(params, 256)
    sweep = alpha_sweep(params, grid, alphas=(0.0, 0.25, 0.5), K=4)
    assert len(sweep.norms) == 3
    gamma = resolvent_marginal(reservoir_mix(params, grid), 1, grid)
    assert close(sweep.norms[0], gamma, atol=1e-6)
    lower, upper = sweep.bracket
    assert lower in sweep.alphas
    assert upper is None or upper > lower
