import math
from math import comb

import numpy as np
import pytest
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as P
from numpy.testing import assert_allclose

from app.core.exceptions import DomainError, UnsupportedDimensionError
from app.data.ritz import TrialBasis
from app.repositories.ritz_repository import RitzRepository, form_pieces, polar_form_integrals


def _cartesian_coefficients(l, m):
    """2-D power coefficients c[i, j] of x^i y^j for (x^2 + y^2)^m Re (x + i y)^l."""
    degree = l + 2 * m
    coefficients = np.zeros((degree + 1, degree + 1))
    for k in range(0, l + 1, 2):
        sign = (-1) ** (k // 2)
        for s in range(m + 1):
            coefficients[l - k + 2 * s, k + 2 * (m - s)] += sign * comb(l, k) * comb(m, s)
    return coefficients


def _hessian_entries(coefficients):
    xx = P.polyder(coefficients, 2, axis=0)
    yy = P.polyder(coefficients, 2, axis=1)
    xy = P.polyder(P.polyder(coefficients, 1, axis=0), 1, axis=1)
    return xx, xy, yy


def _disk_integral(integrand):
    """Integral over the unit disk: Gauss-Legendre in r, uniform rule in theta."""
    nodes, weights = legendre.leggauss(24)
    radii = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    angles = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    r, theta = np.meshgrid(radii, angles, indexing="ij")
    values = integrand(r * np.cos(theta), r * np.sin(theta))
    return float(np.sum(weights[:, None] * r * values) * (2.0 * math.pi / len(angles)))


def test_pieces_of_r_squared():
    hessian, laplacian, mass = form_pieces(0, 1, 1)
    assert_allclose(hessian, 8.0 * math.pi, rtol=1e-15)
    assert_allclose(laplacian, 16.0 * math.pi, rtol=1e-15)
    assert_allclose(mass, math.pi / 3.0, rtol=1e-15)


@pytest.mark.parametrize("l, m1, m2", [(0, 1, 2), (1, 0, 2), (2, 0, 1), (2, 2, 1), (3, 1, 1), (4, 0, 3)])
def test_polar_reduction_matches_cartesian_quadrature(l, m1, m2):
    u = _cartesian_coefficients(l, m1)
    v = _cartesian_coefficients(l, m2)
    u_xx, u_xy, u_yy = _hessian_entries(u)
    v_xx, v_xy, v_yy = _hessian_entries(v)

    def hessian_product(x, y):
        return (
            P.polyval2d(x, y, u_xx) * P.polyval2d(x, y, v_xx)
            + 2.0 * P.polyval2d(x, y, u_xy) * P.polyval2d(x, y, v_xy)
            + P.polyval2d(x, y, u_yy) * P.polyval2d(x, y, v_yy)
        )

    def laplacian_product(x, y):
        return (P.polyval2d(x, y, u_xx) + P.polyval2d(x, y, u_yy)) * (
            P.polyval2d(x, y, v_xx) + P.polyval2d(x, y, v_yy)
        )

    def mass_product(x, y):
        return P.polyval2d(x, y, u) * P.polyval2d(x, y, v)

    expected = [_disk_integral(f) for f in (hessian_product, laplacian_product, mass_product)]
    assert_allclose(form_pieces(l, m1, m2), expected, rtol=1e-10, atol=1e-10)


def test_form_is_affine_in_sigma():
    hessian, laplacian, mass = form_pieces(2, 1, 2)
    value, mass_value = polar_form_integrals(2, 1, 2, 0.25)
    assert_allclose(value, 0.75 * hessian + 0.25 * laplacian, rtol=1e-15)
    assert mass_value == mass


def test_polar_integrals_validate_arguments():
    with pytest.raises(UnsupportedDimensionError):
        polar_form_integrals(0, 0, 1, 0.3, N=3)
    with pytest.raises(DomainError):
        polar_form_integrals(0, 0, 1, 1.5)
    with pytest.raises(DomainError):
        form_pieces(-1, 0, 0)


def test_repository_only_supports_the_plane():
    with pytest.raises(UnsupportedDimensionError):
        RitzRepository(N=3)


def test_assembled_matrices(ritz_repository):
    basis = TrialBasis.full(2, 2)
    matrices = ritz_repository.assemble(basis)
    size = basis.size

    assert size == 15
    assert matrices.blocks == [(0, 3), (3, 6), (6, 9), (9, 12), (12, 15)]
    for array in (matrices.hessian, matrices.laplacian, matrices.mass):
        assert array.shape == (size, size)
        assert np.array_equal(array, array.T)

    inside = np.zeros((size, size), dtype=bool)
    for start, stop in matrices.blocks:
        inside[start:stop, start:stop] = True
    assert np.all(matrices.mass[~inside] == 0.0)

    # 1, x and y have no second derivatives
    for index in (0, 3, 6):
        assert np.all(matrices.hessian[index] == 0.0)
        assert np.all(matrices.laplacian[index] == 0.0)

    assert ritz_repository.assemble(TrialBasis.full(2, 2)) is matrices
