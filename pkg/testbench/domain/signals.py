from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from testbench.core.exceptions import FrequencyOutOfRangeError


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _frozen_complex(values) -> np.ndarray:
    array = np.array(values, dtype=complex)
    array.setflags(write=False)
    return array


class TorusSignal(BaseModel):
    """
    Samples of a vector-valued function on the N-point discrete torus.

    Sample j sits at the grid point j/N; each sample is an array of shape
    `dim_shape` (empty for scalar signals).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_points: int
    dim_shape: Tuple[int, ...] = ()
    samples: np.ndarray

    @field_validator("samples", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return _frozen_complex(value)

    @model_validator(mode="after")
    def _check_grid(self):
        if self.n_points < 8 or not is_power_of_two(self.n_points):
            raise ValueError(f"n_points must be a power of two >= 8, got {self.n_points}")
        if any(d < 1 for d in self.dim_shape):
            raise ValueError(f"dim_shape entries must be positive, got {self.dim_shape}")
        expected = (self.n_points,) + tuple(self.dim_shape)
        if self.samples.shape != expected:
            raise ValueError(f"samples shape {self.samples.shape} != {expected}")
        return self

    @classmethod
    def from_samples(cls, samples) -> "TorusSignal":
        array = np.asarray(samples, dtype=complex)
        return cls(n_points=array.shape[0], dim_shape=array.shape[1:], samples=array)

    @property
    def dimension(self) -> int:
        return int(np.prod(self.dim_shape)) if self.dim_shape else 1

    def flat(self) -> np.ndarray:
        """Samples reshaped to (N, dimension)."""
        return self.samples.reshape(self.n_points, self.dimension)


class Spectrum(BaseModel):
    """Fourier coefficients in increasing frequency order, k = -N/2 ... N/2 - 1."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_points: int
    dim_shape: Tuple[int, ...] = ()
    coefficients: np.ndarray

    @field_validator("coefficients", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return _frozen_complex(value)

    @model_validator(mode="after")
    def _check_shape(self):
        expected = (self.n_points,) + tuple(self.dim_shape)
        if self.coefficients.shape != expected:
            raise ValueError(f"coefficients shape {self.coefficients.shape} != {expected}")
        return self

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.n_points // 2, self.n_points // 2)

    def at(self, k: int) -> np.ndarray:
        """Coefficient of frequency k."""
        half = self.n_points // 2
        if not -half <= k < half:
            raise FrequencyOutOfRangeError(f"frequency {k} outside [-{half}, {half})")
        return self.coefficients[k + half]


class FrequencyInterval(BaseModel):
    """Half-open integer frequency interval [lo, hi)."""

    model_config = ConfigDict(frozen=True)

    lo: int
    hi: int

    @model_validator(mode="after")
    def _check_order(self):
        if self.lo >= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi})")
        return self

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def contains(self, k: int) -> bool:
        return self.lo <= k < self.hi

    def includes(self, other: "FrequencyInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "FrequencyInterval") -> bool:
        return self.lo < other.hi and other.lo < self.hi

    def frequencies(self) -> np.ndarray:
        return np.arange(self.lo, self.hi)

    def fits(self, n_points: int) -> bool:
        half = n_points // 2
        return -half <= self.lo and self.hi <= half

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi})"


class DyadicPartition(BaseModel):
    """The integer dyadic partition of [-N/2, N/2), blocks sorted by `lo`."""

    model_config = ConfigDict(frozen=True)

    n_points: int
    blocks: List[FrequencyInterval] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_tiling(self):
        half = self.n_points // 2
        cursor = -half
        for block in self.blocks:
            if block.lo != cursor:
                raise ValueError(f"blocks do not tile at frequency {cursor}")
            cursor = block.hi
        if cursor != half:
            raise ValueError("blocks do not reach N/2")
        return self

    def block_index(self, k: int) -> int:
        for index, block in enumerate(self.blocks):
            if block.contains(k):
                return index
        raise FrequencyOutOfRangeError(f"frequency {k} not covered")

    def containing_block(self, interval: FrequencyInterval) -> int:
        """Index of the block including `interval`, -1 if it crosses blocks."""
        index = self.block_index(interval.lo)
        return index if self.blocks[index].includes(interval) else -1

    def __len__(self) -> int:
        return len(self.blocks)
