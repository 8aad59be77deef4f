import argparse
from typing import Any, Dict, Literal, Optional

from pydantic import Field

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import (
    ExperimentParams,
    add_experiment_arguments,
    build_symbol,
)
from testbench.core.exceptions import HypothesisViolationError
from testbench.harmonic.multiplier import CHAIN_THEOREMS, multiplier_experiment, region_verdicts

TRIAL_COLUMNS = [
    "trial",
    "n_points",
    "p",
    "q",
    "s",
    "alpha",
    "ap_char",
    "ratio",
    "stage1",
    "stage2",
    "stage3",
]


class MultiplierParams(ExperimentParams):
    symbol: Literal["random", "hilbert", "identity", "file"] = "random"
    symbol_file: Optional[str] = None
    dim: int = Field(default=1, ge=1)
    target_norm: float = Field(default=1.0, ge=0)


class MultiplierCommand(BaseCommand):
    params_model = MultiplierParams

    @property
    def name(self) -> str:
        return "multiplier"

    @property
    def description(self) -> str:
        return "Weighted L^p ratios of a V^s multiplier with the decomposition chain"

    @property
    def columns(self) -> str:
        return "multiplier.csv: " + ", ".join(TRIAL_COLUMNS)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_experiment_arguments(parser)
        group = parser.add_argument_group("symbol")
        group.add_argument("--symbol", choices=["random", "hilbert", "identity", "file"])
        group.add_argument("--symbol-file", help="CSV with columns k, re, im (or re_i, im_i)")
        group.add_argument("--dim", type=int, help="matrix size d of the symbol values")
        group.add_argument("--target-norm", type=float, help="V^s norm of random symbols")

    def execute(self, params: MultiplierParams, context: RunContext) -> Dict[str, Any]:
        config = params.to_config(context.seed, context.threads)
        verdicts = region_verdicts(config)
        admissible = [t for t in CHAIN_THEOREMS if verdicts.get(t) == "admissible"]
        if not admissible and not context.allow_violation:
            raise HypothesisViolationError(
                "no multiplier theorem covers these exponents: "
                + ", ".join(f"{t}={v}" for t, v in verdicts.items()),
                theorem="/".join(CHAIN_THEOREMS),
            )
        symbol = build_symbol(params, context.seed)
        report = multiplier_experiment(config, symbol)
        rows = [[getattr(record, column) for column in TRIAL_COLUMNS] for record in report.trials]
        context.writer.write_table("multiplier", TRIAL_COLUMNS, rows)
        context.writer.write_report(
            "multiplier",
            {
                "config": config.model_dump(exclude={"threads"}),
                "report": report.model_dump(exclude={"trials"}),
            },
        )
        return {
            "ratio": report.ratio,
            "vs_norm": report.vs_norm,
            "lrs_estimate": report.lrs_estimate,
            "normalized_ratio": report.normalized_ratio,
            "admissible_theorems": admissible,
        }
