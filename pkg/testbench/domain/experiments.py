"""Configuration models for the randomized multiplier and square-function experiments."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from testbench.domain.exponent import ExponentField, is_inf
from testbench.domain.signals import is_power_of_two
from testbench.domain.spaces import SpaceSpec


class WeightSpec(BaseModel):
    """
    Weight drawn for each trial.

    `power` weights are |x - center|^α on the torus; with `alpha` unset the
    exponent is sampled inside the admissible Muckenhoupt range.
    """

    model_config = ConfigDict(frozen=True)

    family: Literal["uniform", "power"] = "uniform"
    alpha: Optional[float] = None
    center: int = 0
    shrink: float = Field(default=0.9, gt=0, le=1)


class IntervalFamilySpec(BaseModel):
    """Recursive random splitting of the dyadic blocks."""

    model_config = ConfigDict(frozen=True)

    split_probability: float = Field(default=0.7, ge=0, le=1)
    max_depth: int = Field(default=8, ge=0)
    keep_probability: float = Field(default=0.75, gt=0, le=1)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_points: int = 256
    p: ExponentField = 2
    q: ExponentField = 2
    r: Optional[ExponentField] = None
    s: ExponentField = 2
    theta: Optional[float] = None
    space: SpaceSpec = Field(default_factory=SpaceSpec.scalar)
    weight: WeightSpec = Field(default_factory=WeightSpec)
    intervals: IntervalFamilySpec = Field(default_factory=IntervalFamilySpec)
    trials: int = Field(default=10, ge=1)
    seed: int = 0
    lrs_budget: int = Field(default=400, ge=1)
    threads: Optional[int] = None

    @field_validator("space", mode="before")
    @classmethod
    def _parse_space(cls, value):
        if isinstance(value, str):
            return SpaceSpec.parse(value)
        return value

    @model_validator(mode="after")
    def _check(self):
        if self.n_points < 8 or not is_power_of_two(self.n_points):
            raise ValueError(f"n_points must be a power of two >= 8, got {self.n_points}")
        for name in ("p", "q", "s"):
            value = getattr(self, name)
            if not is_inf(value) and value < 1:
                raise ValueError(f"{name} must lie in [1, inf], got {value}")
        if self.theta is not None and not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        return self
