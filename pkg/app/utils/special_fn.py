"""
Bessel functions of real order and the ultraspherical bundle built on them.

J_nu and the exponentially scaled I_nu are summed from their ascending power
series. The J series cancels badly once z grows; when the ratio between the
sum of term magnitudes and the result exceeds ``_CANCELLATION_LIMIT`` the sum
is repeated in extended precision with mpmath.
"""
import math
import threading
from typing import Dict, List, Tuple

import mpmath

from app.core.config import DEFAULTS
from app.core.exceptions import DomainError
from app.core.logging import get_logger
from app.data.bessel import BesselBundle
from app.data.problem import angular_eigenvalue, bessel_order

logger = get_logger(__name__)

_TRUNCATION = 1e-17
_MAX_TERMS = 400
_CANCELLATION_LIMIT = 1024.0
_BASE_DPS = 20
_MAX_DPS = 80

_STIRLING_SHIFT = 10.0
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
# B_2k / (2k (2k-1)) for k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)

# mpmath keeps its working precision in a process-wide context
_EXTENDED_LOCK = threading.Lock()

CrossProducts = Dict[Tuple[int, int], float]


def gamma_ln(x: float) -> float:
    """
    Natural logarithm of the gamma function for x > 0.

    The argument is shifted up to x >= 10 with the recurrence
    Gamma(x+1) = x Gamma(x) and the Stirling series is summed there.

    Args:
        x: Positive real argument.

    Returns:
        ln Gamma(x).

    Raises:
        DomainError: If x is not a finite positive number.
    """
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(message="gamma_ln requires a finite x > 0", details=f"x = {x!r}")

    product = 1.0
    while x < _STIRLING_SHIFT:
        product *= x
        x += 1.0

    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for coefficient in reversed(_STIRLING):
        series = series * inv2 + coefficient
    series *= inv

    return (x - 0.5) * math.log(x) - x + _HALF_LOG_TWO_PI + series - math.log(product)


def _check_argument(nu: float, z: float) -> None:
    if not nu >= 0.0 or not math.isfinite(nu):
        raise DomainError(message="Bessel order must be a finite nu >= 0", details=f"nu = {nu!r}")
    if not 0.0 <= z <= DEFAULTS.z_max:
        raise DomainError(
            message=f"Bessel argument must lie in [0, {DEFAULTS.z_max:g}]",
            details=f"z = {z!r}",
        )


def _log_leading_factor(nu: float, z: float) -> float:
    """ln of (z/2)^nu / Gamma(nu+1), the factor pulled out of both series."""
    return nu * math.log(0.5 * z) - gamma_ln(nu + 1.0)


def _ascending_terms(nu: float, z: float, alternating: bool) -> List[float]:
    """Terms (+-1)^k (z^2/4)^k / (k! (nu+1)_k) until they drop below the running sum."""
    quarter = 0.25 * z * z
    sign = -1.0 if alternating else 1.0
    terms = [1.0]
    term = 1.0
    partial = 1.0
    for k in range(1, _MAX_TERMS + 1):
        term *= sign * quarter / (k * (nu + k))
        terms.append(term)
        partial += term
        if abs(term) < _TRUNCATION * abs(partial):
            break
    return terms


def _extended_alternating_sum(nu: float, z: float, magnitude: float, total: float) -> float:
    """Re-sum the J series with enough digits to absorb the observed cancellation."""
    if total == 0.0:
        dps = _MAX_DPS
    else:
        dps = min(_MAX_DPS, _BASE_DPS + int(math.ceil(math.log10(magnitude / abs(total)))))

    with _EXTENDED_LOCK, mpmath.workdps(dps):
        quarter = mpmath.mpf(z) ** 2 / 4
        order = mpmath.mpf(nu)
        threshold = mpmath.mpf(10) ** (-dps)
        term = mpmath.mpf(1)
        partial = mpmath.mpf(1)
        for k in range(1, _MAX_TERMS + 1):
            term *= -quarter / (k * (order + k))
            partial += term
            if abs(term) < threshold * abs(partial):
                break
        result = float(partial)

    logger.debug("J series re-summed at %d digits for nu=%s z=%s", dps, nu, z)
    return result


def bessel_j(nu: float, z: float) -> float:
    """
    Bessel function of the first kind J_nu(z) for real nu >= 0 and 0 <= z <= Z_MAX.

    Args:
        nu: Order.
        z: Argument.

    Returns:
        J_nu(z).

    Raises:
        DomainError: If nu or z is outside the supported range.
    """
    _check_argument(nu, z)
    if z == 0.0:
        return 1.0 if nu == 0.0 else 0.0

    terms = _ascending_terms(nu, z, alternating=True)
    total = math.fsum(terms)
    magnitude = math.fsum(abs(term) for term in terms)
    if magnitude > _CANCELLATION_LIMIT * abs(total):
        total = _extended_alternating_sum(nu, z, magnitude, total)

    return math.exp(_log_leading_factor(nu, z)) * total


def bessel_i_scaled(nu: float, z: float) -> float:
    """
    Exponentially scaled modified Bessel function e^{-z} I_nu(z).

    All series terms are positive, so double precision is sufficient and the
    scale factor folds into the leading exponential, which cannot overflow on
    the supported range.
    """
    _check_argument(nu, z)
    if z == 0.0:
        return 1.0 if nu == 0.0 else 0.0

    terms = _ascending_terms(nu, z, alternating=False)
    return math.exp(_log_leading_factor(nu, z) - z) * math.fsum(terms)


def bessel_pairs(N: int, l: int, z: float) -> Tuple[float, float, float, float]:
    """(J_nu, J_nu+1, e^{-z} I_nu, e^{-z} I_nu+1) at z for nu = N/2 - 1 + l."""
    nu = bessel_order(N, l)
    return (
        bessel_j(nu, z),
        bessel_j(nu + 1.0, z),
        bessel_i_scaled(nu, z),
        bessel_i_scaled(nu + 1.0, z),
    )


def ultraspherical_bundle(N: int, l: int, z: float) -> BesselBundle:
    """
    j_l, scaled i_l and their first three derivatives at z.

    First derivatives come from J_nu' = (nu/z) J_nu - J_nu+1 and
    I_nu' = (nu/z) I_nu + I_nu+1; second and third derivatives from the
    ultraspherical equation z^2 f'' + (N-1) z f' + (+-z^2 - L) f = 0 and its
    derivative, with L = l(l+N-2).

    Args:
        N: Space dimension, N >= 2.
        l: Angular index, l >= 0.
        z: Argument, 0 < z <= Z_MAX.

    Returns:
        BesselBundle with scale_exponent = z.

    Raises:
        DomainError: If z <= 0 or z exceeds Z_MAX.
    """
    if not z > 0.0:
        raise DomainError(message="ultraspherical_bundle requires z > 0", details=f"z = {z!r}")

    a, b, a_mod, b_mod = bessel_pairs(N, l, z)
    L = angular_eigenvalue(N, l)
    power = z ** (1.0 - N / 2.0)
    z2 = z * z

    j0 = power * a
    j1 = power * (l * a / z - b)
    j2 = (-(N - 1) * z * j1 - (z2 - L) * j0) / z2
    j3 = (-(N + 1) * z * j2 - (N - 1 + z2 - L) * j1 - 2.0 * z * j0) / z2

    i0 = power * a_mod
    i1 = power * (l * a_mod / z + b_mod)
    i2 = (-(N - 1) * z * i1 + (z2 + L) * i0) / z2
    i3 = (-(N + 1) * z * i2 - (N - 1 - z2 - L) * i1 + 2.0 * z * i0) / z2

    return BesselBundle(
        N=N,
        l=l,
        z=z,
        j=(j0, j1, j2, j3),
        i_scaled=(i0, i1, i2, i3),
        scale_exponent=z,
    )


def bessel_cross_products(N: int, l: int, z: float) -> CrossProducts:
    """
    Closed forms of the six cross products [a, b] = j^(a) i^(b) - i^(a) j^(b).

    Each is written through C+ = I_nu+1 J_nu + I_nu J_nu+1,
    C- = I_nu+1 J_nu - I_nu J_nu+1 and the products J_nu I_nu, J_nu+1 I_nu+1,
    all at the same e^{-z} scaling as ``BesselBundle.cross``.

    Args:
        N: Space dimension.
        l: Angular index.
        z: Argument, z > 0.

    Returns:
        Mapping (a, b) -> scaled value for a < b in 0..3.
    """
    if not z > 0.0:
        raise DomainError(message="bessel_cross_products requires z > 0", details=f"z = {z!r}")

    a, b, a_mod, b_mod = bessel_pairs(N, l, z)
    L = angular_eigenvalue(N, l)
    c_plus = b_mod * a + a_mod * b
    c_minus = b_mod * a - a_mod * b
    aa = a * a_mod
    bb = b * b_mod
    z2 = z * z
    z3 = z2 * z

    return {
        (0, 1): z ** (2 - N) * c_plus,
        (0, 2): z ** (1 - N) * (2.0 * z * aa - (N - 1) * c_plus),
        (1, 2): z ** (-N) * (z2 * c_minus + 2.0 * l * z * aa - L * c_plus),
        (0, 3): z ** (-N) * (
            z2 * c_minus + 2.0 * (1 - N + l) * z * aa + (N * (N - 1) + L) * c_plus
        ),
        (1, 3): z ** (-1 - N) * (
            -2.0 * z3 * bb
            + (1 - N + 2 * l) * z2 * c_minus
            + 2.0 * l * (1 - N + l) * z * aa
            + L * (N + 1) * c_plus
        ),
        (2, 3): z ** (-2 - N) * (
            -z2 * z2 * c_plus
            + 2.0 * (N - 1) * z3 * bb
            - (N - 1) * (2 * l + 1) * z2 * c_minus
            - 2.0 * (N - 3) * (l - 1) * l * z * aa
            + L * (L - N + 1) * c_plus
        ),
    }
