from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from testbench.core.exceptions import FrequencyOutOfRangeError
from testbench.domain.interfaces.gauge import Gauge
from testbench.domain.signals import FrequencyInterval, is_power_of_two
from testbench.domain.spaces import SpaceSpec

POSITIVITY_TOLERANCE = 1e-14


def _frozen(values, dtype=complex) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


class OperatorFamily(BaseModel):
    """Finite family of n×n matrices acting between two mixed-norm spaces."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrices: np.ndarray  # (K, n, n)
    base_space_in: SpaceSpec
    base_space_out: SpaceSpec
    positive: bool = False

    @field_validator("matrices", mode="before")
    @classmethod
    def _stack(cls, value):
        array = np.array(value, dtype=complex)
        if array.ndim == 2:
            array = array[None, :, :]
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self):
        if self.matrices.ndim != 3 or self.matrices.shape[0] == 0:
            raise ValueError("family must be a nonempty stack of matrices")
        _, rows, cols = self.matrices.shape
        if rows != cols:
            raise ValueError(f"family matrices must be square, got {rows}x{cols}")
        if self.base_space_in.size != cols or self.base_space_out.size != rows:
            raise ValueError(
                f"base spaces of sizes {self.base_space_in.size}/"
                f"{self.base_space_out.size} do not fit {rows}x{cols} matrices"
            )
        if self.positive and not is_entrywise_nonnegative(self.matrices):
            raise ValueError("positive family has negative or complex entries")
        return self

    @classmethod
    def on_lp(cls, matrices, exponent, positive: Optional[bool] = None) -> "OperatorFamily":
        """Family acting on ℓ^p_n in and out; positivity detected when not given."""
        stack = np.array(matrices, dtype=complex)
        if stack.ndim == 2:
            stack = stack[None]
        spec = SpaceSpec.lp(exponent, stack.shape[-1])
        if positive is None:
            positive = is_entrywise_nonnegative(stack)
        return cls(matrices=stack, base_space_in=spec, base_space_out=spec, positive=positive)

    @property
    def size(self) -> int:
        return self.matrices.shape[0]

    @property
    def dimension(self) -> int:
        return self.matrices.shape[-1]


def is_entrywise_nonnegative(matrices: np.ndarray) -> bool:
    matrices = np.asarray(matrices)
    return bool(
        np.all(np.abs(matrices.imag) <= POSITIVITY_TOLERANCE)
        and np.all(matrices.real >= -POSITIVITY_TOLERANCE)
    )


class LrsWitness(BaseModel):
    """
    Doubly indexed test configuration: operators T_{selection[j,k]} applied
    to inputs[j,k].
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    selection: np.ndarray  # (m, n) family indices
    inputs: np.ndarray  # (m, n, dim)
    lhs: float = 0.0
    rhs: float = 1.0

    @field_validator("selection", mode="before")
    @classmethod
    def _as_int(cls, value):
        return np.array(value, dtype=int)

    @field_validator("inputs", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return np.array(value, dtype=complex)

    @model_validator(mode="after")
    def _check(self):
        if self.selection.ndim != 2:
            raise ValueError("selection must be an m×n grid")
        if self.inputs.shape[:2] != self.selection.shape or self.inputs.ndim != 3:
            raise ValueError(
                f"inputs shape {self.inputs.shape} does not match selection "
                f"{self.selection.shape}"
            )
        return self

    @property
    def bound(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else 0.0

    @property
    def grid(self) -> Tuple[int, int]:
        return tuple(self.selection.shape)


class BlockValues(BaseModel):
    """Values of a symbol on consecutive frequencies start, start+1, ..."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray  # (L,) scalars or (L, d, d) matrices
    gauge: Gauge
    start: int = 0

    @field_validator("entries", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return _frozen(value)

    @model_validator(mode="after")
    def _check(self):
        if self.entries.shape[0] == 0:
            raise ValueError("block must contain at least one value")
        return self

    @property
    def length(self) -> int:
        return self.entries.shape[0]

    @property
    def interval(self) -> FrequencyInterval:
        return FrequencyInterval(lo=self.start, hi=self.start + self.length)


class Atom(BaseModel):
    """Step function: coefficient c_I on each listed subinterval, zero elsewhere."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    intervals: List[FrequencyInterval]
    coefficients: np.ndarray  # (pieces,) or (pieces, d, d)

    @field_validator("coefficients", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return np.array(value, dtype=complex)

    @model_validator(mode="after")
    def _check(self):
        if len(self.intervals) != self.coefficients.shape[0]:
            raise ValueError("one coefficient per interval required")
        return self

    def values_on(self, block: FrequencyInterval) -> np.ndarray:
        """Dense values of the atom on the frequencies of `block`."""
        shape = (block.length,) + self.coefficients.shape[1:]
        dense = np.zeros(shape, dtype=complex)
        for interval, coefficient in zip(self.intervals, self.coefficients):
            dense[interval.lo - block.lo : interval.hi - block.lo] = coefficient
        return dense


class AtomicDecomposition(BaseModel):
    """f = Σ_k λ_k a_k on one block."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    lambdas: List[float]
    atoms: List[Atom]
    target_q: float
    method: str = "layered"

    @model_validator(mode="after")
    def _check(self):
        if len(self.lambdas) != len(self.atoms):
            raise ValueError("one coefficient per atom required")
        return self

    @property
    def l1_mass(self) -> float:
        return float(np.sum(np.abs(self.lambdas)))

    def reconstruct(self, block: FrequencyInterval) -> np.ndarray:
        if not self.atoms:
            return np.zeros(block.length, dtype=complex)
        total = None
        for weight, atom in zip(self.lambdas, self.atoms):
            term = weight * atom.values_on(block)
            total = term if total is None else total + term
        return total


class Symbol(BaseModel):
    """
    Matrix-valued multiplier symbol on the frequencies -N/2 ... N/2-1.

    Scalar symbols are stored as 1×1 matrices.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_points: int
    entries: np.ndarray  # (N, d, d)
    metadata: dict = Field(default_factory=dict)

    @field_validator("entries", mode="before")
    @classmethod
    def _as_matrices(cls, value):
        array = np.array(value, dtype=complex)
        if array.ndim == 1:
            array = array[:, None, None]
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check(self):
        if self.n_points < 8 or not is_power_of_two(self.n_points):
            raise ValueError(f"n_points must be a power of two >= 8, got {self.n_points}")
        if self.entries.ndim != 3 or self.entries.shape[0] != self.n_points:
            raise ValueError(f"entries must have shape (N, d, d), got {self.entries.shape}")
        if self.entries.shape[1] != self.entries.shape[2]:
            raise ValueError("symbol values must be square matrices")
        return self

    @classmethod
    def scalar(cls, values, **metadata) -> "Symbol":
        values = np.asarray(values, dtype=complex)
        return cls(n_points=values.shape[0], entries=values, metadata=metadata)

    @classmethod
    def constant(cls, n_points: int, value) -> "Symbol":
        value = np.atleast_2d(np.asarray(value, dtype=complex))
        return cls(n_points=n_points, entries=np.broadcast_to(value, (n_points,) + value.shape))

    @property
    def dimension(self) -> int:
        return self.entries.shape[1]

    @property
    def is_scalar(self) -> bool:
        return self.dimension == 1

    def at(self, k: int) -> np.ndarray:
        half = self.n_points // 2
        if not -half <= k < half:
            raise FrequencyOutOfRangeError(f"frequency {k} outside [-{half}, {half})")
        return self.entries[k + half]

    def restrict(self, interval: FrequencyInterval) -> np.ndarray:
        """Values on an interval; 1×1 symbols come back as scalars."""
        half = self.n_points // 2
        values = self.entries[interval.lo + half : interval.hi + half]
        return values[:, 0, 0] if self.is_scalar else values

    def block(self, interval: FrequencyInterval, gauge: Gauge) -> BlockValues:
        return BlockValues(entries=self.restrict(interval), gauge=gauge, start=interval.lo)

    def scaled(self, factor: complex) -> "Symbol":
        return Symbol(n_points=self.n_points, entries=factor * self.entries, metadata=self.metadata)

    def __add__(self, other: "Symbol") -> "Symbol":
        return Symbol(n_points=self.n_points, entries=self.entries + other.entries)

    def operator_norms(self) -> np.ndarray:
        """‖m(k)‖ on ℓ²_d for every frequency."""
        return np.linalg.norm(self.entries, ord=2, axis=(1, 2))
