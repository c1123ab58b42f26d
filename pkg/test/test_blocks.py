from math import pi, sqrt

import numpy as np
import pytest

from bgkness.errors import ParameterError, ShapeError
from bgkness.model import ModelParams
from bgkness.spectral import (
    Convention,
    assemble_mode_block,
    build_basis,
    coercivity_check,
    coercivity_corpus,
    collision_apply,
    collision_matrix,
    explicit_rate,
    gain_column,
    mco_roots,
    quadratic_form_gap,
    streaming_matrix,
)

from .utils import close, equal

ALPHAS = [0.0, 0.25, 0.5, 0.75, 0.99]

M = 16


def unit(m, order=M):
    vec = np.zeros(order)
    vec[m] = 1.0
    return vec


@pytest.fixture(scope="module", params=ALPHAS, ids=lambda a: f"alpha={a}")
def alpha_basis(request):
    return build_basis(ModelParams(request.param, 1.0, 3.0), M=M)


def test_convention():
    assert equal(Convention("torus").frequency(3), 6 * pi)
    assert equal(Convention.Circle.frequency(3), 3.0)
    with pytest.raises(ValueError):
        Convention("line")


def test_streaming_matrix(basis):
    S = streaming_matrix(basis)
    root_t = sqrt(basis.params.t_inf)
    assert np.all(np.diag(S) == 0)
    assert close(S[0, 1], root_t, rtol=1e-8)
    assert close(S[1, 2], root_t / basis.c_alpha, rtol=1e-14)
    assert np.all(np.triu(S, 2) == 0)


def test_gain_column(alpha_basis):
    alpha = alpha_basis.params.alpha
    b = gain_column(alpha_basis)
    assert close(b[:2], 0.0, atol=1e-10)
    assert close(b[2], alpha, rtol=1e-8, atol=1e-12)
    # Odd basis functions have no overlap with the even H_2 M_T∞.
    assert close(b[1::2], 0.0, atol=1e-10)

    L = collision_matrix(alpha_basis)
    G = L + np.eye(M)
    assert close(G[:, 0], unit(0), atol=0)
    assert close(np.delete(G, [0, 2], axis=1), 0.0, atol=0)


def test_gain_column_equilibrium():
    basis = build_basis(ModelParams(1.0, 1.0, 3.0), M=M)
    assert close(gain_column(basis), unit(2), atol=1e-8)


def test_collision_apply(alpha_basis):
    alpha = alpha_basis.params.alpha
    assert close(collision_apply(unit(0), alpha_basis), 0.0, atol=1e-10)
    assert close(collision_apply(unit(1), alpha_basis), -unit(1), atol=1e-10)
    image = collision_apply(unit(2), alpha_basis)
    assert close(image[2], alpha - 1, rtol=1e-8, atol=1e-12)

    batch = np.stack([unit(0), unit(1), unit(2)])
    assert close(collision_apply(batch, alpha_basis)[2], image, rtol=1e-15)


def test_collision_apply_errors(basis):
    with pytest.raises(ShapeError):
        collision_apply(np.ones(basis.order + 1), basis)
    with pytest.raises(ParameterError):
        collision_apply(unit(0, basis.order), basis, ModelParams(0.1, 1.0, 3.0))


def test_coercivity_examples():
    basis = build_basis(ModelParams(0.0, 1.0, 3.0), M=M)
    lhs, rhs = coercivity_check(unit(2), basis.params, basis)
    assert close(lhs, -1.0, rtol=1e-12)
    assert close(rhs, -0.5, rtol=1e-14)

    lhs, rhs = coercivity_check(unit(0), basis.params, basis)
    assert close([lhs, rhs], [0.0, 0.0], atol=1e-14)

    basis = build_basis(ModelParams(1.0, 1.0, 3.0), M=M)
    lhs, rhs = coercivity_check(unit(2), basis.params, basis)
    assert close(lhs, 0.0, atol=1e-8)
    assert equal(rhs, 0.0)


def test_coercivity_corpus(alpha_basis):
    report = coercivity_corpus(alpha_basis.params, alpha_basis, samples=10_000, seed=1)
    assert report.holds, report.max_excess
    assert report.min_rate >= (1 - report.alpha) / 2 - 1e-8
    assert equal(report.samples, 10_000)


@pytest.mark.parametrize("alpha", np.linspace(0, 1, 11))
def test_quadratic_form_gap(alpha):
    assert close(quadratic_form_gap(alpha), (alpha - 1) / 2, atol=1e-12)
    assert close(mco_roots(alpha), [(alpha - 1) / 2, (alpha - 3) / 2], atol=1e-12)


def test_quadratic_form_gap_range():
    with pytest.raises(ParameterError):
        quadratic_form_gap(1.5)


@pytest.mark.parametrize("convention", list(Convention))
@pytest.mark.parametrize("k", [1, 2, 7])
def test_lyapunov_matrix_spectrum(basis, convention, k):
    c = 0.3
    block = assemble_mode_block(k, basis.params, basis, c, convention)
    shift = c / block.kappa
    expected = np.sort([1 - shift, 1 + shift] + [1.0] * (basis.order - 2))
    assert close(block.equivalence(), expected, atol=1e-12)
    assert np.array_equal(block.P, block.P.conj().T)


def test_mode_generator(basis):
    block = assemble_mode_block(2, basis.params, basis, 0.25)
    S, L = streaming_matrix(basis), collision_matrix(basis)
    assert equal(block.kappa, 4 * pi)
    assert np.array_equal(block.C, -(L - 1j * block.kappa * S))
    assert block.gap() > 0


def test_zero_mode_block(basis):
    block = assemble_mode_block(0, basis.params, basis, 0.25)
    assert np.array_equal(block.P, np.eye(basis.order))
    assert np.array_equal(block.C, -collision_matrix(basis))


def test_dissipation_remainder(basis):
    """R lives in the top 3×3 corner: R_00 = 2c√T∞, R_01 = -ic/κ, R_02 = c√T∞/c_α."""
    c = 0.25
    block = assemble_mode_block(1, basis.params, basis, c)
    R = block.dissipation_remainder()
    root_t = sqrt(basis.params.t_inf)

    assert close(R[0, 0], 2 * c * root_t, rtol=1e-8)
    assert close(R[0, 1], -1j * c / block.kappa, rtol=1e-12)
    assert close(R[1, 0], 1j * c / block.kappa, rtol=1e-12)
    assert close(R[0, 2], c * root_t / basis.c_alpha, rtol=1e-8)
    assert close(R[1, 1], -2 * c * root_t, rtol=1e-8)
    assert close(R[3:, :], 0.0, atol=1e-10)
    assert close(R[:, 3:], 0.0, atol=1e-10)


def test_certificate_matches_form(basis):
    block = assemble_mode_block(1, basis.params, basis, 0.2)
    form = block.dissipation_form()
    assert close(block.certificate(0.0), np.linalg.eigvalsh(form).min(), atol=1e-12)
    assert block.certificate(0.1) > block.certificate(0.2)


def test_assemble_errors(basis):
    with pytest.raises(ParameterError):
        assemble_mode_block(1, basis.params, basis, 1.0)
    with pytest.raises(ParameterError):
        assemble_mode_block(1, basis.params, basis, -0.1)
    with pytest.raises(ParameterError):
        assemble_mode_block(1, ModelParams(0.1, 1.0, 3.0), basis, 0.2)

    small = assemble_mode_block(1, basis.params, basis, 0.2, M=5)
    assert equal(small.order, 5)


def test_degenerate_mixing():
    """At α = 1 no rate is certified: c = 0 and the Lyapunov matrices reduce to the identity."""
    params = ModelParams(1.0, 1.0, 3.0)
    basis = build_basis(params, M=M)
    c = explicit_rate(params).c
    assert equal(c, 0.0)

    block = assemble_mode_block(3, params, basis, c)
    assert np.array_equal(block.P, np.eye(M))
    form = block.dissipation_form()
    assert close(block.certificate(0.0), np.linalg.eigvalsh(form).min(), atol=1e-12)
