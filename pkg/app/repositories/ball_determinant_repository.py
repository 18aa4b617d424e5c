"""
Repository for the boundary determinants on the unit ball.

Assembles the clamped-plate cross product, the free-plate 2x2 matrix and its
sigma = 1 collapse from ultraspherical Bessel bundles. All work is done at
z = lambda**(1/4); the i-column always carries the factor e^{-z}.
"""
import math
from typing import Dict, Tuple

import numpy as np

from app.core.config import DEFAULTS
from app.core.exceptions import DomainError, NotAnEigenvalueError
from app.core.logging import get_logger
from app.data.bessel import BesselBundle
from app.data.determinant import DetEval, RadialEigenfunction
from app.data.problem import BallProblem, BoundaryKind, angular_eigenvalue
from app.utils.special_fn import bessel_cross_products, ultraspherical_bundle

logger = get_logger(__name__)

Profile = Tuple[float, float, float, float]


def equilibrate(matrix: np.ndarray) -> np.ndarray:
    """Divide every row by its largest absolute entry (rows of zeros are left alone)."""
    scales = np.max(np.abs(matrix), axis=1)
    scales = np.where(scales == 0.0, 1.0, scales)
    return matrix / scales[:, None]


def det2(matrix: np.ndarray) -> float:
    return float(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0])


def smallest_singular_direction(matrix: np.ndarray) -> Tuple[float, float, float]:
    """
    Right singular vector of the smallest singular value of a 2x2 matrix.

    Closed form from the principal axes of M^T M. The vector has unit norm
    and a non-negative first component.

    Returns:
        (alpha, beta, sigma_min / sigma_max)
    """
    a, b = float(matrix[0, 0]), float(matrix[0, 1])
    c, d = float(matrix[1, 0]), float(matrix[1, 1])
    theta = 0.5 * math.atan2(2.0 * (a * b + c * d), (a * a + c * c) - (b * b + d * d))
    alpha, beta = -math.sin(theta), math.cos(theta)
    if alpha < 0.0 or (alpha == 0.0 and beta < 0.0):
        alpha, beta = -alpha, -beta

    sigma_min = math.hypot(a * alpha + b * beta, c * alpha + d * beta)
    frobenius2 = a * a + b * b + c * c + d * d
    sigma_max = math.sqrt(max(frobenius2 - sigma_min * sigma_min, 0.0))
    ratio = sigma_min / sigma_max if sigma_max > 0.0 else 0.0
    return alpha, beta, ratio


class BallDeterminantRepository:
    """
    Raw access to boundary matrices and determinants.

    Arguments are checked for their mathematical domain only; choosing
    windows and tolerances is left to the services.
    """

    def __init__(self, z_max: float = DEFAULTS.z_max):
        """
        Initialize determinant repository.

        Args:
            z_max: Largest supported z = lambda**(1/4)
        """
        self.z_max = z_max

    def to_z(self, lam: float) -> float:
        """Convert lambda to z, rejecting lambda <= 0 and lambda beyond Z_MAX**4."""
        if not lam > 0.0:
            raise DomainError(message="lambda must be positive", details=f"lambda = {lam!r}")
        if lam > self.z_max ** 4:
            raise DomainError(
                message=f"lambda must not exceed {self.z_max ** 4:g}",
                details=f"lambda = {lam!r}",
            )
        return min(lam ** 0.25, self.z_max)

    @staticmethod
    def _check_sigma(sigma: float) -> None:
        if not 0.0 <= sigma <= 1.0:
            raise DomainError(message="sigma must lie in [0, 1]", details=f"sigma = {sigma!r}")

    def bundle(self, N: int, l: int, z: float) -> BesselBundle:
        return ultraspherical_bundle(N, l, z)

    # Matrices at z

    def dirichlet_matrix_z(self, N: int, l: int, z: float) -> np.ndarray:
        """[[j, i~], [j', i~']] at z."""
        bundle = self.bundle(N, l, z)
        return np.array(
            [
                [bundle.j[0], bundle.i_scaled[0]],
                [bundle.j[1], bundle.i_scaled[1]],
            ]
        )

    def neumann_matrix_z(
        self, N: int, l: int, z: float, sigma: float, scaled: bool = True
    ) -> np.ndarray:
        """
        Free-plate boundary matrix at z.

        Row 1 is (1-sigma) d_rr + sigma Delta applied to f(z r) at r = 1, row 2
        the Kirchhoff shear condition; column 1 uses j_l, column 2 the scaled
        i_l, or the true i_l when ``scaled`` is False.
        """
        self._check_sigma(sigma)
        bundle = self.bundle(N, l, z)
        L = angular_eigenvalue(N, l)
        z2 = z * z
        z3 = z2 * z

        def rows(f: Tuple[float, float, float, float]) -> Tuple[float, float]:
            first = z2 * f[2] + (N - 1) * z * sigma * f[1] - L * sigma * f[0]
            second = (
                z3 * f[3]
                + (N - 1) * z2 * f[2]
                + z * (1 - N + L * (sigma - 2.0)) * f[1]
                - L * (sigma - 3.0) * f[0]
            )
            return first, second

        j_first, j_second = rows(bundle.j)
        i_first, i_second = rows(bundle.i_scaled)
        matrix = np.array([[j_first, i_first], [j_second, i_second]])
        if not scaled:
            matrix[:, 1] *= math.exp(bundle.scale_exponent)
        return matrix

    def matrix_z(self, problem: BallProblem, l: int, z: float) -> np.ndarray:
        if problem.kind is BoundaryKind.DIRICHLET:
            return self.dirichlet_matrix_z(problem.N, l, z)
        return self.neumann_matrix_z(problem.N, l, z, problem.sigma)

    def sign_value(self, problem: BallProblem, l: int, z: float) -> float:
        """Row-equilibrated determinant at z; its sign is the sign of the true determinant."""
        return det2(equilibrate(self.matrix_z(problem, l, z)))

    def evaluate(
        self, problem: BallProblem, l: int, z: float, lam: float | None = None
    ) -> DetEval:
        matrix = self.matrix_z(problem, l, z)
        return DetEval(
            lam=z ** 4 if lam is None else lam,
            z=z,
            value_scaled=det2(matrix),
            value_equilibrated=det2(equilibrate(matrix)),
            scale_exponent=z,
            l=l,
        )

    # Public operations in lambda

    def dirichlet_matrix(self, N: int, l: int, lam: float) -> np.ndarray:
        return self.dirichlet_matrix_z(N, l, self.to_z(lam))

    def dirichlet_det(self, N: int, l: int, lam: float) -> DetEval:
        """Scaled j_l i_l' - i_l j_l' at z = lambda**(1/4)."""
        problem = BallProblem(N=N, kind=BoundaryKind.DIRICHLET)
        return self.evaluate(problem, l, self.to_z(lam), lam)

    def neumann_matrix(
        self, N: int, l: int, lam: float, sigma: float, scaled: bool = True
    ) -> np.ndarray:
        self._check_sigma(sigma)
        return self.neumann_matrix_z(N, l, self.to_z(lam), sigma, scaled=scaled)

    def neumann_det(self, N: int, l: int, lam: float, sigma: float) -> DetEval:
        self._check_sigma(sigma)
        problem = BallProblem(N=N, sigma=sigma, kind=BoundaryKind.NEUMANN)
        return self.evaluate(problem, l, self.to_z(lam), lam)

    def f_short(self, N: int, l: int, lam: float) -> float:
        """
        Scaled det M(lambda, 1) in collapsed form.

        At sigma = 1 the rows reduce to (-z^2 j, z^2 i) and (-z^3 j', z^3 i'),
        hence det M(lambda, 1) = -lambda^(5/4) (j i' - i j').
        """
        z = self.to_z(lam)
        return -(z ** 5) * self.bundle(N, l, z).cross(0, 1)

    def f_long(self, N: int, l: int, lam: float, use_identities: bool = False) -> float:
        """
        Scaled det M(lambda, 1) expanded over the six cross products [a, b].

        Args:
            use_identities: Take [a, b] from their closed forms in J and I
                instead of from the derivative bundle.
        """
        z = self.to_z(lam)
        if use_identities:
            cross = bessel_cross_products(N, l, z)
        else:
            bundle = self.bundle(N, l, z)
            cross = {pair: bundle.cross(*pair) for pair in _f_long_coefficients(N, l, z)}
        return math.fsum(
            coefficient * cross[pair] for pair, coefficient in _f_long_coefficients(N, l, z).items()
        )

    def f_long_scale(self, N: int, l: int, lam: float) -> float:
        """Sum of |coefficient| * magnitude of [a, b] over the terms of ``f_long``."""
        z = self.to_z(lam)
        bundle = self.bundle(N, l, z)
        return math.fsum(
            abs(coefficient) * bundle.cross_scale(*pair)
            for pair, coefficient in _f_long_coefficients(N, l, z).items()
        )

    def neumann_det_scale(self, N: int, l: int, z: float, sigma: float) -> float:
        """
        Magnitude of the scaled free-plate determinant built from term magnitudes.

        Every entry is replaced by the sum of the absolute values of its terms,
        so cancellation inside an entry is not credited to the determinant.
        """
        self._check_sigma(sigma)
        bundle = self.bundle(N, l, z)
        L = angular_eigenvalue(N, l)

        def rows(f: Tuple[float, float, float, float]) -> Tuple[float, float]:
            first = z * z * abs(f[2]) + (N - 1) * z * sigma * abs(f[1]) + L * sigma * abs(f[0])
            second = (
                z ** 3 * abs(f[3])
                + (N - 1) * z * z * abs(f[2])
                + z * abs(1 - N + L * (sigma - 2.0)) * abs(f[1])
                + L * abs(sigma - 3.0) * abs(f[0])
            )
            return first, second

        j_first, j_second = rows(bundle.j)
        i_first, i_second = rows(bundle.i_scaled)
        return j_first * i_second + i_first * j_second

    # Null vectors and radial profiles

    def _kernel(self, matrix: np.ndarray, N: int, l: int, lam: float, tol: float) -> RadialEigenfunction:
        alpha, beta, ratio = smallest_singular_direction(equilibrate(matrix))
        if ratio > tol:
            raise NotAnEigenvalueError(
                details=f"N={N} l={l} lambda={lam!r}: sigma_min/sigma_max = {ratio:.3e}"
            )
        return RadialEigenfunction(
            N=N, l=l, lam=lam, alpha=alpha, beta_scaled=beta, residual=ratio
        )

    def null_vector(
        self, N: int, l: int, lam: float, sigma: float, tol: float = DEFAULTS.tol_det
    ) -> RadialEigenfunction:
        """
        Unit kernel vector (alpha, beta~) of the scaled free-plate matrix.

        Raises:
            NotAnEigenvalueError: If the matrix is not singular within ``tol``.
        """
        return self._kernel(self.neumann_matrix(N, l, lam, sigma), N, l, lam, tol)

    def dirichlet_null_vector(
        self, N: int, l: int, lam: float, tol: float = DEFAULTS.tol_det
    ) -> RadialEigenfunction:
        """Unit kernel vector of [[j, i~], [j', i~']], the clamped radial profile W_l."""
        return self._kernel(self.dirichlet_matrix(N, l, lam), N, l, lam, tol)

    def radial_profile(self, eigenfunction: RadialEigenfunction, r: float) -> Profile:
        """
        U(r) and its first three r-derivatives for U(r) = alpha j(z r) + beta i(z r).

        The scaled coefficient is re-weighted by e^{-z(1-r)}, which stays below
        one for r <= 1.
        """
        if not 0.0 < r <= 1.0:
            raise DomainError(message="radius must lie in (0, 1]", details=f"r = {r!r}")
        z = eigenfunction.z
        bundle = self.bundle(eigenfunction.N, eigenfunction.l, z * r)
        weight = eigenfunction.beta_scaled * math.exp(-z * (1.0 - r))
        return tuple(
            (z ** k) * (eigenfunction.alpha * bundle.j[k] + weight * bundle.i_scaled[k])
            for k in range(4)
        )

    def neumann_boundary_residuals(
        self, eigenfunction: RadialEigenfunction, sigma: float
    ) -> Tuple[float, float]:
        """
        Relative residuals of both free-plate conditions at r = 1 in spherical form.

        (1-sigma) U'' + sigma Delta U = 0 reduces to U'' + sigma (N-1) U' - sigma L U,
        the shear condition to U''' + (N-1) U'' + (1 - N - L(2-sigma)) U' + L(3-sigma) U.
        Each residual is divided by the sum of magnitudes of its terms.
        """
        N, L = eigenfunction.N, angular_eigenvalue(eigenfunction.N, eigenfunction.l)
        u0, u1, u2, u3 = self.radial_profile(eigenfunction, 1.0)
        moment = (u2, sigma * (N - 1) * u1, -sigma * L * u0)
        shear = (u3, (N - 1) * u2, (1 - N - L * (2.0 - sigma)) * u1, L * (3.0 - sigma) * u0)
        return _relative(moment), _relative(shear)

    def dirichlet_boundary_residuals(self, eigenfunction: RadialEigenfunction) -> Tuple[float, float]:
        """Relative values of W(1) and W'(1) for a clamped profile."""
        z = eigenfunction.z
        bundle = self.bundle(eigenfunction.N, eigenfunction.l, z)
        value = (eigenfunction.alpha * bundle.j[0], eigenfunction.beta_scaled * bundle.i_scaled[0])
        slope = (eigenfunction.alpha * bundle.j[1], eigenfunction.beta_scaled * bundle.i_scaled[1])
        return _relative(value), _relative(slope)


def _relative(terms: Tuple[float, ...]) -> float:
    scale = math.fsum(abs(term) for term in terms)
    if scale == 0.0:
        return 0.0
    return abs(math.fsum(terms)) / scale


def _f_long_coefficients(N: int, l: int, z: float) -> Dict[Tuple[int, int], float]:
    """Coefficients of the six cross products in the expansion of det M(lambda, 1)."""
    L = angular_eigenvalue(N, l)
    z2 = z * z
    z3 = z2 * z
    return {
        (0, 1): L * z * (L - N + 1),
        (0, 2): -L * (N + 1) * z2,
        (0, 3): -L * z3,
        (1, 2): (N * (N - 1) + L) * z3,
        (1, 3): (N - 1) * z2 * z2,
        (2, 3): z2 * z3,
    }
