import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import DomainError, NotAnEigenvalueError
from app.data.determinant import RadialEigenfunction
from app.data.problem import BallProblem, BoundaryKind
from app.repositories.ball_determinant_repository import det2, equilibrate, smallest_singular_direction


@pytest.mark.parametrize("lam", [0.0, -3.0, 30.0 ** 4 * 1.01])
def test_lambda_outside_window_is_rejected(determinant_repository, lam):
    with pytest.raises(DomainError):
        determinant_repository.dirichlet_det(2, 0, lam)


@pytest.mark.parametrize("sigma", [-0.1, 1.5])
def test_sigma_outside_unit_interval_is_rejected(determinant_repository, sigma):
    with pytest.raises(DomainError):
        determinant_repository.neumann_det(2, 0, 10.0, sigma)


def test_equilibrate_scales_rows_and_keeps_sign():
    matrix = np.array([[4.0, -2.0], [0.5, 0.25]])
    scaled = equilibrate(matrix)
    assert_allclose(np.max(np.abs(scaled), axis=1), [1.0, 1.0])
    assert math.copysign(1.0, det2(scaled)) == math.copysign(1.0, det2(matrix))


def test_smallest_singular_direction_of_singular_matrix():
    alpha, beta, ratio = smallest_singular_direction(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert_allclose([alpha, beta], np.array([2.0, -1.0]) / math.sqrt(5.0), atol=1e-15)
    assert ratio < 1e-15


def test_first_clamped_eigenvalue_is_bracketed(determinant_repository):
    below = determinant_repository.dirichlet_det(2, 0, 100.0)
    above = determinant_repository.dirichlet_det(2, 0, 110.0)
    assert below.value_scaled * above.value_scaled < 0.0
    assert math.copysign(1.0, below.value_scaled) == math.copysign(1.0, below.value_equilibrated)


def test_unscaled_matrix_restores_the_exponential(determinant_repository):
    lam = 7.3 ** 4
    scaled = determinant_repository.neumann_matrix(3, 2, lam, 0.3)
    unscaled = determinant_repository.neumann_matrix(3, 2, lam, 0.3, scaled=False)
    assert np.array_equal(scaled[:, 0], unscaled[:, 0])
    assert_allclose(unscaled[:, 1], scaled[:, 1] * math.exp(7.3), rtol=1e-14)


def test_sign_value_matches_evaluate(determinant_repository):
    problem = BallProblem(N=2, sigma=0.4, kind=BoundaryKind.NEUMANN)
    for z in (1.0, 2.5, 4.0):
        evaluation = determinant_repository.evaluate(problem, 2, z)
        assert determinant_repository.sign_value(problem, 2, z) == evaluation.value_equilibrated
        assert evaluation.lam == z ** 4


def test_collapsed_determinant_is_negative_near_zero(determinant_repository):
    assert determinant_repository.f_short(2, 0, 1.0) < 0.0


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("l", [0, 1, 5, 8])
@pytest.mark.parametrize("z", [0.1, 1.3, 6.0, 19.0])
def test_sigma_one_determinant_collapses(determinant_repository, N, l, z):
    lam = z ** 4
    determinant = det2(determinant_repository.neumann_matrix(N, l, lam, 1.0))
    collapsed = determinant_repository.f_short(N, l, lam)
    scale = determinant_repository.neumann_det_scale(N, l, determinant_repository.to_z(lam), 1.0)
    assert abs(determinant - collapsed) <= 1e-8 * scale


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("l", [0, 2, 7])
@pytest.mark.parametrize("z", [0.2, 2.0, 9.0])
def test_expanded_determinant_agrees_with_collapse(determinant_repository, N, l, z):
    lam = z ** 4
    scale = 1e-8 * determinant_repository.f_long_scale(N, l, lam)
    expanded = determinant_repository.f_long(N, l, lam)
    closed = determinant_repository.f_long(N, l, lam, use_identities=True)
    assert abs(expanded - determinant_repository.f_short(N, l, lam)) <= scale
    assert abs(closed - expanded) <= scale


def test_null_vector_away_from_an_eigenvalue_raises(determinant_repository):
    with pytest.raises(NotAnEigenvalueError):
        determinant_repository.null_vector(2, 0, 50.0, 0.0)
    with pytest.raises(NotAnEigenvalueError):
        determinant_repository.dirichlet_null_vector(2, 0, 50.0)


def test_radial_profile_rejects_radius_outside_ball(determinant_repository):
    eigenfunction = RadialEigenfunction(N=2, l=0, lam=100.0, alpha=1.0, beta_scaled=0.0, residual=0.0)
    with pytest.raises(DomainError):
        determinant_repository.radial_profile(eigenfunction, 1.5)
    with pytest.raises(DomainError):
        determinant_repository.radial_profile(eigenfunction, 0.0)


def test_radial_profile_at_centre_of_pure_bessel_mode(determinant_repository):
    eigenfunction = RadialEigenfunction(N=2, l=0, lam=16.0, alpha=1.0, beta_scaled=0.0, residual=0.0)
    value, slope, _, _ = determinant_repository.radial_profile(eigenfunction, 1e-8)
    assert_allclose(value, 1.0, rtol=1e-12)
    assert abs(slope) < 1e-6


def _radial_derivatives(values, h):
    """Derivatives 0..3 at the centre of nine samples spaced h apart."""
    coefficients = np.polynomial.polynomial.polyfit(np.arange(-4, 5), values, 8)
    return [math.factorial(k) * coefficients[k] / h ** k for k in range(4)]


def test_free_plate_matrix_matches_finite_difference_assembly(determinant_repository):
    N, l, lam, sigma = 3, 1, 50.0, 0.3
    z = lam ** 0.25
    L = l * (l + N - 2)
    h = 1e-2
    radii = 1.0 + h * np.arange(-4, 5)
    j_values = [determinant_repository.bundle(N, l, z * r).j[0] for r in radii]
    i_values = [determinant_repository.bundle(N, l, z * r).i_scaled[0] * math.exp(z * (r - 1.0)) for r in radii]

    def column(values):
        u0, u1, u2, u3 = _radial_derivatives(values, h)
        moment = u2 + sigma * (N - 1) * u1 - sigma * L * u0
        shear = u3 + (N - 1) * u2 + (1 - N + L * (sigma - 2.0)) * u1 - L * (sigma - 3.0) * u0
        return [moment, shear]

    rebuilt = np.column_stack([column(j_values), column(i_values)])
    matrix = determinant_repository.neumann_matrix(N, l, lam, sigma)
    assert_allclose(rebuilt, matrix, rtol=1e-6, atol=1e-8)
    assert abs(det2(rebuilt) - det2(matrix)) <= 1e-5


def test_free_plate_matrix_without_poisson_or_angular_terms(determinant_repository):
    N, lam = 2, 30.0
    z = lam ** 0.25
    bundle = determinant_repository.bundle(N, 0, z)
    expected = np.array([
        [z ** 2 * f[2], z ** 3 * f[3] + (N - 1) * z ** 2 * f[2] + z * (1 - N) * f[1]]
        for f in (bundle.j, bundle.i_scaled)
    ]).T
    assert_allclose(determinant_repository.neumann_matrix(N, 0, lam, 0.0), expected, rtol=1e-13)


def test_swapping_columns_flips_the_determinant(determinant_repository):
    for matrix in (
        determinant_repository.neumann_matrix(2, 3, 200.0, 0.4),
        determinant_repository.dirichlet_matrix(3, 1, 80.0),
    ):
        assert det2(matrix[:, ::-1]) == -det2(matrix)


def test_scaled_and_unscaled_determinants_change_sign_together(determinant_repository):
    scaled_signs = []
    unscaled_signs = []
    for lam in np.geomspace(1.0, 3000.0, 80):
        scaled_signs.append(np.sign(det2(determinant_repository.neumann_matrix(2, 1, lam, 0.3))))
        unscaled_signs.append(np.sign(det2(determinant_repository.neumann_matrix(2, 1, lam, 0.3, scaled=False))))
    assert scaled_signs == unscaled_signs
    assert len(set(scaled_signs)) == 2


@pytest.mark.parametrize("z", [0.3, 0.7, 1.0])
def test_unscaled_determinant_at_small_lambda(determinant_repository, z):
    lam = z ** 4
    scaled = det2(determinant_repository.neumann_matrix(3, 2, lam, 0.3))
    unscaled = det2(determinant_repository.neumann_matrix(3, 2, lam, 0.3, scaled=False))
    assert_allclose(unscaled, scaled * math.exp(determinant_repository.to_z(lam)), rtol=1e-10)
