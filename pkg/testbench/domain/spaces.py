import re
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    field_validator,
    model_validator,
)

from testbench.domain.exponent import (
    ExponentField,
    conjugate,
    format_exponent,
    is_inf,
    parse_exponent,
)


class Layer(BaseModel):
    """One ℓ^r_n layer of a mixed sequence-space norm."""

    model_config = ConfigDict(frozen=True)

    exponent: ExponentField
    dimension: int

    @model_validator(mode="after")
    def _check(self):
        if not is_inf(self.exponent) and self.exponent < 1:
            raise ValueError(f"layer exponent must be >= 1, got {self.exponent}")
        if self.dimension < 1:
            raise ValueError(f"layer dimension must be positive, got {self.dimension}")
        return self

    def __str__(self) -> str:
        return f"l{format_exponent(self.exponent)}:{self.dimension}"


_LAYER_PATTERN = re.compile(r"^l([^:]+):(\d+)$")


class SpaceSpec(BaseModel):
    """
    Finite-dimensional mixed norm, layers listed outermost first.

    No layers means the scalar field itself.
    """

    model_config = ConfigDict(frozen=True)

    layers: Tuple[Layer, ...] = ()

    @classmethod
    def scalar(cls) -> "SpaceSpec":
        return cls(layers=())

    @classmethod
    def lp(cls, exponent: Any, dimension: int) -> "SpaceSpec":
        return cls(layers=(Layer(exponent=exponent, dimension=dimension),))

    @classmethod
    def parse(cls, text: str) -> "SpaceSpec":
        """
        Parse "scalar", "l2:3" or nested forms such as "l3:2(l2:4)".

        Outer layers come first, parentheses wrap inner layers.
        """
        text = text.replace(" ", "")
        if text in ("", "scalar"):
            return cls.scalar()
        parts = text.replace(")", "").split("(")
        layers = []
        for part in parts:
            match = _LAYER_PATTERN.match(part)
            if not match:
                raise ValueError(f"cannot parse space layer {part!r} in {text!r}")
            layers.append(
                Layer(exponent=parse_exponent(match.group(1)), dimension=int(match.group(2)))
            )
        return cls(layers=tuple(layers))

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(layer.dimension for layer in self.layers)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape)) if self.layers else 1

    @property
    def exponents(self):
        return tuple(layer.exponent for layer in self.layers)

    def dual(self) -> "SpaceSpec":
        return SpaceSpec(
            layers=tuple(
                Layer(exponent=conjugate(layer.exponent), dimension=layer.dimension)
                for layer in self.layers
            )
        )

    def nest(self, *inner: Layer) -> "SpaceSpec":
        """X(ℓ^r_m(ℓ^s_n)): append inner layers below the existing ones."""
        return SpaceSpec(layers=self.layers + tuple(inner))

    def __str__(self) -> str:
        if not self.layers:
            return "scalar"
        text = str(self.layers[-1])
        for layer in reversed(self.layers[:-1]):
            text = f"{layer}({text})"
        return text


class Weight(BaseModel):
    """Strictly positive grid function with cached Muckenhoupt characteristics."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    metadata: Dict[str, Any] = Field(default_factory=dict)

    _cache: Dict[Tuple, float] = PrivateAttr(default_factory=dict)

    @field_validator("values", mode="before")
    @classmethod
    def _as_float(cls, value):
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_positive(self):
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("weight values must be a nonempty 1-d array")
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0):
            raise ValueError("weight values must be strictly positive and finite")
        return self

    @classmethod
    def uniform(cls, n_points: int) -> "Weight":
        return cls(values=np.ones(n_points), metadata={"family": "uniform"})

    @property
    def n_points(self) -> int:
        return self.values.size

    def cached(self, key: Tuple) -> Optional[float]:
        return self._cache.get(key)

    def remember(self, key: Tuple, value: float) -> float:
        self._cache[key] = value
        return value


def exponent_key(value) -> str:
    """Hashable exponent label for caches and reports."""
    if isinstance(value, (Fraction, str)):
        return format_exponent(value)
    return repr(float(value))
