"""Symbols, weights and operator families described by command-line parameters."""

import argparse
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field

from testbench.core.exceptions import InvalidParameterError
from testbench.domain.experiments import ExperimentConfig, WeightSpec
from testbench.domain.exponent import ExponentField
from testbench.domain.operators import OperatorFamily, Symbol
from testbench.domain.spaces import SpaceSpec, Weight
from testbench.harmonic.counterexample import tk_family
from testbench.harmonic.mixed_norms import power_weight
from testbench.harmonic.multiplier import random_vs_symbol
from testbench.infrastructure.serialization import read_json, read_symbol_csv, read_weight_csv


class SymbolParams(BaseModel):
    n_points: int = 256
    s: ExponentField = 2
    symbol: Literal["random", "hilbert", "identity", "file"] = "random"
    symbol_file: Optional[str] = None
    dim: int = Field(default=1, ge=1)
    target_norm: float = Field(default=1.0, ge=0)


class WeightParams(BaseModel):
    weight: Literal["uniform", "power", "file"] = "uniform"
    weight_file: Optional[str] = None
    alpha: Optional[float] = None
    center: int = 0


class FamilyParams(BaseModel):
    family: Literal["tk", "diagonal", "random", "file"] = "tk"
    family_file: Optional[str] = None
    n: int = Field(default=4, ge=1)
    grid_points: Optional[int] = None
    values: Optional[str] = None
    size: int = Field(default=3, ge=1)
    dim: int = Field(default=3, ge=1)
    base_p: ExponentField = 2


def add_symbol_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("symbol")
    group.add_argument("--n-points", type=int, help="grid size N, a power of two >= 8")
    group.add_argument("--symbol", choices=["random", "hilbert", "identity", "file"])
    group.add_argument("--symbol-file", help="CSV with columns k, re, im (or re_i, im_i)")
    group.add_argument("--dim", type=int, help="matrix size d of the symbol values")
    group.add_argument("--target-norm", type=float, help="V^s norm of random symbols")


def add_weight_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("weight")
    group.add_argument("--weight", choices=["uniform", "power", "file"])
    group.add_argument("--weight-file", help="CSV with columns j, w")
    group.add_argument("--alpha", type=float, help="power weight exponent")
    group.add_argument("--center", type=int, help="grid index of the power weight singularity")


def add_family_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("operator family")
    group.add_argument("--family", choices=["tk", "diagonal", "random", "file"])
    group.add_argument("--family-file", help='JSON {"matrices": [...], "space": "l2:4"}')
    group.add_argument("--n", type=int, help="number of averaging operators for --family tk")
    group.add_argument("--grid-points", type=int, help="grid size for --family tk")
    group.add_argument("--values", help="comma separated diagonal for --family diagonal")
    group.add_argument("--size", type=int, help="members of a random family")
    group.add_argument("--dim", type=int, help="matrix size of a random family")
    group.add_argument("--base-p", help="exponent of the ℓ^p base space")


def build_symbol(params: SymbolParams, seed: int) -> Symbol:
    n, d = params.n_points, params.dim
    if params.symbol == "file":
        if not params.symbol_file:
            raise InvalidParameterError("--symbol file needs --symbol-file")
        return read_symbol_csv(params.symbol_file, d)
    if params.symbol == "random":
        return random_vs_symbol(seed, params.s, d, n, params.target_norm)
    k = np.arange(-n // 2, n // 2)
    if params.symbol == "hilbert":
        scalars = -1j * np.sign(k)
    else:
        scalars = np.ones(n, dtype=complex)
    entries = scalars[:, None, None] * np.eye(d)[None, :, :]
    return Symbol(n_points=n, entries=entries, metadata={"kind": params.symbol})


def build_weight(params: WeightParams, n_points: int) -> Optional[Weight]:
    if params.weight == "uniform":
        return None
    if params.weight == "file":
        if not params.weight_file:
            raise InvalidParameterError("--weight file needs --weight-file")
        return read_weight_csv(params.weight_file)
    if params.alpha is None:
        raise InvalidParameterError("--weight power needs --alpha")
    return power_weight(n_points, params.alpha, params.center)


def build_family(params: FamilyParams, seed: int) -> OperatorFamily:
    if params.family == "tk":
        return tk_family(params.n, params.grid_points, float(params.base_p))
    if params.family == "diagonal":
        if not params.values:
            raise InvalidParameterError("--family diagonal needs --values")
        try:
            diagonal = [float(item) for item in params.values.split(",")]
        except ValueError as exc:
            raise InvalidParameterError(f"cannot read --values {params.values!r}") from exc
        return OperatorFamily.on_lp(np.diag(diagonal), params.base_p)
    if params.family == "random":
        rng = np.random.default_rng(seed)
        matrices = rng.standard_normal((params.size, params.dim, params.dim))
        return OperatorFamily.on_lp(matrices, params.base_p, positive=False)
    if not params.family_file:
        raise InvalidParameterError("--family file needs --family-file")
    payload = read_json(params.family_file)
    try:
        matrices = np.array(payload["matrices"], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidParameterError(f"{params.family_file} has no usable 'matrices'") from exc
    if matrices.ndim == 2:
        matrices = matrices[None]
    spec = SpaceSpec.parse(payload["space"]) if "space" in payload else None
    if spec is None:
        return OperatorFamily.on_lp(matrices, params.base_p)
    return OperatorFamily(
        matrices=matrices,
        base_space_in=spec,
        base_space_out=spec,
        positive=bool(payload.get("positive", False)),
    )


class ExperimentParams(BaseModel):
    n_points: int = 256
    p: ExponentField = 2
    q: ExponentField = 2
    s: ExponentField = 2
    r: Optional[ExponentField] = None
    space: str = "scalar"
    trials: int = Field(default=10, ge=1)
    weight_family: Literal["uniform", "power"] = "uniform"
    alpha: Optional[float] = None
    center: int = 0
    lrs_budget: int = Field(default=400, ge=1)

    def to_config(self, seed: int, threads: Optional[int] = None) -> ExperimentConfig:
        return ExperimentConfig(
            n_points=self.n_points,
            p=self.p,
            q=self.q,
            s=self.s,
            r=self.r,
            space=self.space,
            trials=self.trials,
            weight=WeightSpec(family=self.weight_family, alpha=self.alpha, center=self.center),
            seed=seed,
            lrs_budget=self.lrs_budget,
            threads=threads,
        )


def add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("experiment")
    group.add_argument("--n-points", type=int, help="grid size N, a power of two >= 8")
    for name in ("p", "q", "s", "r"):
        group.add_argument(f"--{name}", help=f"exponent {name} (rational or inf)")
    group.add_argument("--space", help='lattice X, e.g. "scalar" or "l3:2(l2:2)"')
    group.add_argument("--trials", type=int, help="number of random trials")
    group.add_argument("--weight-family", choices=["uniform", "power"])
    group.add_argument("--alpha", type=float, help="fixed power weight exponent")
    group.add_argument("--center", type=int, help="grid index of the weight singularity")
    group.add_argument(
        "--lrs-budget", type=int, help="evaluations of the ℓ²(ℓ^{q'}) estimate"
    )
