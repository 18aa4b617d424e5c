import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import DomainError, UnsupportedDimensionError
from app.data.problem import BallProblem
from app.data.ritz import TrialBasis
from app.services.ritz_service import default_basis


@pytest.mark.parametrize("j, expected", [(1, 0.0), (3, 0.0), (4, 192.0), (5, 240.0), (6, 1728.0)])
def test_explicit_decay_constants(ritz_service, j, expected):
    assert_allclose(ritz_service.est_conv_constant(j), expected, rtol=1e-12)


def test_harmonic_energies(ritz_service):
    assert_allclose(ritz_service.harmonic_energies(5), [0.0, 0.0, 0.0, 48.0, 48.0], rtol=1e-12, atol=1e-12)


def test_decay_constant_only_in_the_plane(ritz_service):
    with pytest.raises(UnsupportedDimensionError):
        ritz_service.est_conv_constant(4, N=3)


def test_rigid_motions_give_three_zero_ritz_values(ritz_service):
    bounds = ritz_service.ritz_upper_bounds(default_basis(), 0.3, 4)
    assert all(abs(value) < 1e-10 for value in bounds[:3])
    assert bounds[3] > 1.0
    assert ritz_service.kernel_dimension(default_basis(), 0.3) == 3


def test_harmonic_quadrupole_bound_is_exact(ritz_service):
    bounds = ritz_service.harmonic_bounds(0.5, 4)
    assert_allclose(bounds[3], 24.0, rtol=1e-12)


def test_bounds_decrease_as_the_basis_grows(ritz_service):
    rows = ritz_service.bounds_for_bases(0.3, 6, [2, 4, 6])
    for coarse, fine in zip(rows, rows[1:]):
        for before, after in zip(coarse, fine):
            assert after <= before * (1.0 + 1e-9) + 1e-9


def test_bounds_sit_above_the_determinant_eigenvalues(ritz_service, spectrum_service):
    truth = spectrum_service.assemble_spectrum(BallProblem(N=2, sigma=0.3), 500.0, 6, 8).values()
    bounds = ritz_service.ritz_upper_bounds(default_basis(), 0.3, 8)
    for lam, bound in zip(truth, bounds):
        assert bound >= lam * (1.0 - 1e-7) - 1e-9
    # polynomials of degree <= 18 resolve the low modes closely
    for lam, bound in zip(truth[3:], bounds[3:]):
        assert (bound - lam) / lam < 0.05


def test_invalid_requests(ritz_service):
    with pytest.raises(DomainError):
        ritz_service.ritz_upper_bounds(default_basis(), 1.0, 3)
    with pytest.raises(DomainError):
        ritz_service.ritz_upper_bounds(TrialBasis.harmonic(1), 0.3, 4)
    with pytest.raises(DomainError):
        ritz_service.harmonic_energies(0)
