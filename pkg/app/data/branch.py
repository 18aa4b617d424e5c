"""
Pydantic models for eigenvalue curves in sigma and the reports checked on them.
"""
from enum import Enum
from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.data.problem import BoundaryKind


class BranchStatus(str, Enum):
    """Outcome of tracing one branch across the sigma grid."""
    COMPLETE = "complete"
    LOST = "lost"
    MERGED_WINDOW = "merged_window"
    EXITED_WINDOW = "exited_window"


class BranchSample(BaseModel):
    """A point (sigma, lambda) on a branch with the determinant residual there."""
    sigma: float
    lam: float = Field(..., gt=0.0, alias="lambda")
    residual: float

    model_config = ConfigDict(populate_by_name=True, frozen=True)


class SampledCurve(BaseModel):
    """Sampled curve sigma -> lambda(sigma) with strictly increasing sigma."""
    N: int
    samples: List[BranchSample]

    @field_validator("samples")
    @classmethod
    def sigma_strictly_increasing(cls, samples: List[BranchSample]) -> List[BranchSample]:
        for previous, current in zip(samples, samples[1:]):
            if current.sigma <= previous.sigma:
                raise ValueError("curve samples must have strictly increasing sigma")
        return samples

    @property
    def sigmas(self) -> List[float]:
        return [sample.sigma for sample in self.samples]

    @property
    def lambdas(self) -> List[float]:
        return [sample.lam for sample in self.samples]

    @property
    def label(self) -> str:
        return f"N={self.N}"

    def value_at(self, sigma: float, tol: float = 1e-12) -> Optional[float]:
        """Lambda of the sample recorded at ``sigma``, if any."""
        for sample in self.samples:
            if abs(sample.sigma - sigma) <= tol:
                return sample.lam
        return None


class Branch(SampledCurve):
    """
    Sampled curve sigma -> lambda(sigma) for fixed (N, l, branch ordinal).

    The ordinal is the position of the starting root inside family (N, l) at
    the first traced sigma; it is never re-indexed later.
    """
    l: int
    branch_ordinal: int = Field(..., ge=1)
    kind: BoundaryKind = BoundaryKind.NEUMANN
    status: BranchStatus = BranchStatus.COMPLETE

    @property
    def label(self) -> str:
        return f"N={self.N} l={self.l} branch={self.branch_ordinal}"


class OrdinalCurve(SampledCurve):
    """Fixed-ordinal curve sigma -> lambda_j(sigma) of the merged spectrum."""
    ordinal: int = Field(..., ge=1)

    @property
    def label(self) -> str:
        return f"N={self.N} j={self.ordinal}"


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    WARN = "warn"
    INCONCLUSIVE = "inconclusive"
    SKIPPED = "skipped"


class CheckReport(BaseModel):
    """
    Result of one numerical check.

    ``worst_ratio`` is the largest observed value of (measured / allowed);
    a passing check keeps it at or below 1. ``location`` names where the
    worst ratio was met.
    """
    check: str
    status: CheckStatus
    worst_ratio: Optional[float] = None
    location: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.status in (CheckStatus.FAIL, CheckStatus.INCONCLUSIVE)


class DecayReport(CheckReport):
    """Decay check result with the sup and tail values of lambda/(1-sigma)."""
    sup_ratio: Optional[float] = None
    tail_ratio: Optional[float] = None


class VerificationReport(BaseModel):
    """All check reports produced by one verification run."""
    N: int
    reports: List[CheckReport]

    @property
    def failed_checks(self) -> List[str]:
        return [report.check for report in self.reports if report.failed]

    @property
    def passed(self) -> bool:
        return not self.failed_checks
