"""
Repository for the quadratic forms of polynomial trial functions on the unit disk.

Trial functions are u = r^n trig(l theta) with n = l + 2m. Every radial
integrand reduces to a single monomial, so all integrals are closed-form.
"""
import math
from typing import Dict, List, Tuple

import numpy as np

from app.core.exceptions import DomainError, UnsupportedDimensionError
from app.core.logging import get_logger
from app.data.ritz import FormMatrices, TrialBasis, TrialFunction

logger = get_logger(__name__)


def angular_weight(l: int) -> float:
    """Integral of trig(l theta)**2 over [0, 2 pi]."""
    return 2.0 * math.pi if l == 0 else math.pi


def _monomial_term(coefficient: float, power: int) -> float:
    """coefficient * integral_0^1 r^(power - 1) dr, zero when the coefficient is."""
    if coefficient == 0.0:
        return 0.0
    if power <= 0:
        raise DomainError(
            message="divergent radial integral",
            details=f"r^{power - 1} with coefficient {coefficient!r}",
        )
    return coefficient / power


def form_pieces(l: int, m1: int, m2: int) -> Tuple[float, float, float]:
    """
    Hessian, Laplacian and mass integrals between r^(l+2 m1) trig and r^(l+2 m2) trig.

    With n, k the two radial degrees the polar reduction gives
        hessian   = c [n(n-1)k(k-1) + 2 l^2 (n-1)(k-1) + (n-l^2)(k-l^2)] / (n+k-2)
        laplacian = c (n^2-l^2)(k^2-l^2) / (n+k-2)
        mass      = c / (n+k+2)
    where c is the angular weight.

    Returns:
        (hessian, laplacian, mass)
    """
    if l < 0 or m1 < 0 or m2 < 0:
        raise DomainError(message="trial indices must be non-negative", details=f"l={l}, m1={m1}, m2={m2}")
    n = l + 2 * m1
    k = l + 2 * m2
    l2 = l * l
    weight = angular_weight(l)

    hessian = _monomial_term(
        float(n * (n - 1) * k * (k - 1) + 2 * l2 * (n - 1) * (k - 1) + (n - l2) * (k - l2)),
        n + k - 2,
    )
    laplacian = _monomial_term(float((n * n - l2) * (k * k - l2)), n + k - 2)
    mass = 1.0 / (n + k + 2)
    return weight * hessian, weight * laplacian, weight * mass


def polar_form_integrals(l: int, m1: int, m2: int, sigma: float, N: int = 2) -> Tuple[float, float]:
    """
    Form value a and mass value b between two trial functions sharing index l.

    a = (1 - sigma) * integral D^2 u : D^2 v + sigma * integral Delta u Delta v.

    Raises:
        UnsupportedDimensionError: If N != 2
        DomainError: If sigma lies outside [0, 1]
    """
    if N != 2:
        raise UnsupportedDimensionError(operation="polar_form_integrals", dimension=N)
    if not 0.0 <= sigma <= 1.0:
        raise DomainError(message="sigma must lie in [0, 1]", details=f"sigma = {sigma!r}")
    hessian, laplacian, mass = form_pieces(l, m1, m2)
    return (1.0 - sigma) * hessian + sigma * laplacian, mass


class RitzRepository:
    """
    Assembles the Hessian, Laplacian and mass matrices of a trial basis.

    Angular blocks do not couple, so the matrices are block diagonal with
    one block per (l, trig) pair.
    """

    def __init__(self, N: int = 2):
        if N != 2:
            raise UnsupportedDimensionError(operation="RitzRepository", dimension=N)
        self.N = N
        self._cache: Dict[Tuple[Tuple[int, int], ...], FormMatrices] = {}

    @staticmethod
    def blocks(functions: List[TrialFunction]) -> List[Tuple[int, int]]:
        """Half-open index ranges of consecutive functions sharing (l, trig)."""
        ranges: List[Tuple[int, int]] = []
        start = 0
        for index in range(1, len(functions) + 1):
            if index == len(functions) or (functions[index].l, functions[index].trig) != (
                functions[start].l, functions[start].trig
            ):
                ranges.append((start, index))
                start = index
        return ranges

    def assemble(self, basis: TrialBasis) -> FormMatrices:
        """
        Form matrices of ``basis``; A(sigma) is recovered with ``stiffness(sigma)``.

        Results are cached per basis.
        """
        key = tuple(basis.entries)
        cached = self._cache.get(key)
        if cached is not None:
            return cached

        functions = basis.functions()
        size = len(functions)
        hessian = np.zeros((size, size))
        laplacian = np.zeros((size, size))
        mass = np.zeros((size, size))
        ranges = self.blocks(functions)

        for start, stop in ranges:
            for i in range(start, stop):
                for j in range(start, stop):
                    h, d, b = form_pieces(functions[i].l, functions[i].m, functions[j].m)
                    hessian[i, j] = h
                    laplacian[i, j] = d
                    mass[i, j] = b

        logger.debug("Assembled %d trial functions in %d block(s)", size, len(ranges))
        matrices = FormMatrices(
            functions=functions, hessian=hessian, laplacian=laplacian, mass=mass, blocks=ranges,
        )
        self._cache[key] = matrices
        return matrices
