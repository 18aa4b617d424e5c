"""
Small dense symmetric eigensolvers used by the Rayleigh-Ritz oracle.

``jacobi_eigh`` is a cyclic Jacobi sweep; ``generalized_eigh`` reduces
A x = theta B x to standard form with the Cholesky factor of B.
"""
import math
from typing import Tuple

import numpy as np

from app.core.exceptions import SingularMassMatrixError
from app.core.logging import get_logger

logger = get_logger(__name__)

_PIVOT_RATIO = 1e-7


def jacobi_eigh(
    matrix: np.ndarray,
    tol: float = 1e-15,
    max_sweeps: int = 60,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Entries that are exactly zero are never rotated, so rows and columns that
    vanish identically keep an exact zero eigenvalue.

    Args:
        matrix: Square symmetric matrix.
        tol: Sweeps stop once the off-diagonal Frobenius norm falls below
            ``tol`` times the Frobenius norm of the matrix.
        max_sweeps: Hard cap on full sweeps.

    Returns:
        (eigenvalues ascending, eigenvectors as columns in the same order).
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("jacobi_eigh expects a square matrix")
    v = np.eye(n)
    scale = float(np.linalg.norm(a))

    for sweep in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                negligible = 100.0 * abs(apq)
                if sweep > 3 and abs(a[p, p]) + negligible == abs(a[p, p]) \
                        and abs(a[q, q]) + negligible == abs(a[q, q]):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        logger.warning("Jacobi iteration hit %d sweeps on a %dx%d matrix", max_sweeps, n, n)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def cholesky_factor(mass: np.ndarray) -> np.ndarray:
    """
    Lower Cholesky factor of a Gram matrix.

    Raises:
        SingularMassMatrixError: If the factorization fails or a pivot is
            negligible compared with the largest one.
    """
    try:
        factor = np.linalg.cholesky(mass)
    except np.linalg.LinAlgError as exc:
        raise SingularMassMatrixError(details=str(exc)) from exc

    pivots = np.abs(np.diag(factor))
    if pivots.size and pivots.min() < _PIVOT_RATIO * pivots.max():
        raise SingularMassMatrixError(
            details=f"pivot ratio {pivots.min() / pivots.max():.3e} below {_PIVOT_RATIO:g}"
        )
    return factor


def lower_triangular_inverse(factor: np.ndarray) -> np.ndarray:
    """
    Inverse of a lower triangular matrix by forward substitution.

    Entries above the diagonal are exact zeros, so a row of A that vanishes
    identically stays zero in L^{-1} A L^{-T}.
    """
    n = factor.shape[0]
    inverse = np.zeros_like(factor, dtype=float)
    for i in range(n):
        row = np.zeros(n)
        row[i] = 1.0
        for k in range(i):
            row -= factor[i, k] * inverse[k]
        inverse[i] = row / factor[i, i]
    return inverse


def reduce_to_standard(stiffness: np.ndarray, mass: np.ndarray) -> np.ndarray:
    """C = L^{-1} A L^{-T} for B = L L^T, symmetrized."""
    inverse = lower_triangular_inverse(cholesky_factor(mass))
    reduced = inverse @ stiffness @ inverse.T
    return 0.5 * (reduced + reduced.T)


def generalized_eigh(stiffness: np.ndarray, mass: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of A x = theta B x in ascending order.

    Args:
        stiffness: Symmetric A.
        mass: Symmetric positive definite B.

    Returns:
        Ascending eigenvalues.

    Raises:
        SingularMassMatrixError: If B is numerically singular.
    """
    eigenvalues, _ = jacobi_eigh(reduce_to_standard(stiffness, mass))
    return eigenvalues
