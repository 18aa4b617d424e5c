"""
Configuration module for runtime settings and numerical defaults.

Runtime knobs (log level, log file, worker count) are read from the
environment with pydantic-settings. Numerical constants live in the frozen
``SolverDefaults`` model and are never environment driven, so identical
command lines always reproduce identical data.
"""
from typing import Optional, Tuple
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables using Pydantic.

    Only diagnostics and scheduling are configurable here; nothing in this
    object may change a computed eigenvalue.
    """
    LOG_LEVEL: str = Field("WARNING")
    LOG_FILE: Optional[str] = Field(None)
    MAX_WORKERS: int = Field(1, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="BALLSPEC_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


class SolverDefaults(BaseModel):
    """
    Numerical defaults shared by the determinant, root and continuation layers.

    Attributes:
        z_max: Largest supported Bessel argument; lambda <= z_max**4.
        z_min: Lower end of every root scan (excludes the lambda = 0 degeneracy).
        z_step: Default scan step in z = lambda**(1/4).
        bisection_rtol: Bracket width target relative to max(1, z).
        bisection_max_iter: Hard cap on bisection steps.
        dedupe_tol: Roots closer than this in z are merged.
        tol_det: Acceptance threshold on the row-equilibrated determinant.
        bracket_windows: Relative half-widths in z tried while tracing a branch.
        window_subdivisions: Sub-intervals scanned inside each bracket window.
        decay_factor: Allowed growth of lambda/(1-sigma) beyond sigma = 0.9.
        lipschitz_slack: Relative slack granted to the Lipschitz inequalities.
    """
    model_config = ConfigDict(frozen=True)

    z_max: float = 30.0
    z_min: float = 1e-2
    z_step: float = 1e-2
    bisection_rtol: float = 1e-12
    bisection_max_iter: int = 200
    dedupe_tol: float = 1e-8
    tol_det: float = 1e-8

    dimension: int = 2
    sigma: float = 0.0
    count: int = 10
    lambda_max: float = 500.0
    l_max: int = 12

    bracket_windows: Tuple[float, ...] = (0.02, 0.08, 0.32)
    window_subdivisions: int = 8
    sigma_step: float = 0.01
    sigma_tail: Tuple[float, ...] = (0.9, 0.99, 0.999)

    decay_factor: float = 3.0
    decay_reference_sigma: float = 0.9
    decay_min_sigma: float = 0.99
    lipschitz_slack: float = 1e-9

    figure_lambda_cap: float = 500.0
    figure_l_max: int = 9


settings = Settings()
DEFAULTS = SolverDefaults()
