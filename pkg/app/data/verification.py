"""
Pydantic model fixing the grids and thresholds of the verification suite.
"""
from typing import Tuple
from pydantic import BaseModel, ConfigDict, Field


class VerificationPlan(BaseModel):
    """
    Parameters of every check run by ``verify``.

    The defaults reproduce the full acceptance grids; tests shrink them.
    """
    model_config = ConfigDict(frozen=True)

    identity_dimensions: Tuple[int, ...] = (2, 3, 4)
    identity_l_max: int = 6
    identity_z: Tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0)
    identity_rtol: float = 1e-8
    identity_floor: float = 1e-12

    collapse_dimensions: Tuple[int, ...] = (2, 3, 4)
    collapse_l_max: int = 8
    collapse_points: int = Field(200, ge=2)
    collapse_lambda_range: Tuple[float, float] = (1.0, 5e5)
    collapse_rtol: float = 1e-8
    collapse_floor: float = 1e-12

    coincidence_dimensions: Tuple[int, ...] = (2, 3)
    coincidence_l_max: int = 5
    coincidence_z_max: float = 30.0
    coincidence_roots: int = 10
    coincidence_rtol: float = 1e-8

    zero_mode_dimensions: Tuple[int, ...] = (2, 3, 4)
    zero_mode_sigmas: Tuple[float, ...] = (0.0, 0.5, 0.9)
    zero_mode_lambda_max: float = 200.0
    zero_mode_l_max: int = 4

    decay_lambda_cap: float = 2000.0
    decay_l_max: int = 7
    decay_sigma_step: float = 0.05
    decay_ordinals: int = 8
    dirichlet_fraction: float = 0.5

    ritz_sigmas: Tuple[float, ...] = (0.0, 0.3, 0.7)
    ritz_count: int = 8
    ritz_m_values: Tuple[int, ...] = (2, 4, 6)
    ritz_l_max: int = 6
    ritz_lambda_max: float = 500.0
    ritz_gap: float = 0.05
    ritz_gap_ordinals: int = 6
    ritz_rtol: float = 1e-7

    figure_lambda_cap: float = 500.0
    figure_l_max: int = 9
    figure_sigma_step: float = 0.01
    figure_check_sigmas: Tuple[float, float] = (0.5, 0.99)

    grid_sigmas: Tuple[float, ...] = (0.0, 0.5)
    grid_l_max: int = 2
    grid_lambda_max: float = 500.0
    grid_rtol: float = 1e-9
