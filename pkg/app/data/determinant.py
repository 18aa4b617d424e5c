"""
Pydantic models for determinant evaluations and reconstructed radial profiles.
"""
from pydantic import BaseModel, ConfigDict, Field


class DetEval(BaseModel):
    """
    One evaluation of a boundary determinant at lambda.

    ``value_scaled`` is the determinant with the i-column multiplied by
    e^{-z}; ``value_equilibrated`` is the determinant after each row has been
    divided by its largest entry. Both share the sign of the true determinant.
    """
    lam: float = Field(..., gt=0.0, alias="lambda")
    z: float
    value_scaled: float
    value_equilibrated: float
    scale_exponent: float
    l: int = Field(..., ge=0)

    model_config = ConfigDict(populate_by_name=True)


class RadialEigenfunction(BaseModel):
    """
    Radial profile U_l(r) = alpha j_l(z r) + beta i_l(z r) of an eigenfunction.

    ``beta_scaled`` multiplies the scaled i_l, so (alpha, beta_scaled) is a unit
    null vector of the scaled boundary matrix.
    """
    N: int
    l: int
    lam: float = Field(..., gt=0.0, alias="lambda")
    alpha: float
    beta_scaled: float
    residual: float = Field(..., ge=0.0)

    model_config = ConfigDict(populate_by_name=True)

    @property
    def z(self) -> float:
        return self.lam ** 0.25
