"""
Pydantic model for one validated command-line run.
"""
from enum import Enum
from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import DEFAULTS


class Subcommand(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    BRANCHES = "branches"
    VERIFY = "verify"
    FIGURE1 = "figure1"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """
    Run configuration built from command-line flags; validated before any computation.
    """
    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    N: int = Field(DEFAULTS.dimension, ge=2)
    sigma: float = Field(DEFAULTS.sigma, ge=0.0, le=1.0)
    count: int = Field(DEFAULTS.count, ge=1)
    lambda_max: float = Field(DEFAULTS.lambda_max, gt=0.0)
    l_max: int = Field(DEFAULTS.l_max, ge=0)
    z_step: float = Field(DEFAULTS.z_step, gt=0.0)
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV

    @model_validator(mode="after")
    def check_window(self) -> "RunConfig":
        if self.lambda_max > DEFAULTS.z_max ** 4:
            raise ValueError(f"lambda_max must not exceed {DEFAULTS.z_max ** 4:g}")
        if self.lambda_max ** 0.25 <= DEFAULTS.z_min:
            raise ValueError("lambda_max leaves an empty scan window")
        if self.z_step >= self.lambda_max ** 0.25:
            raise ValueError("z_step must be smaller than the scan window")
        return self

    @property
    def writes_stdout(self) -> bool:
        return self.output in (None, "-")
