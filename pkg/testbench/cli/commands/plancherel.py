import argparse
from typing import Any, Dict

from pydantic import Field

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import SymbolParams, add_symbol_arguments, build_symbol
from testbench.harmonic.multiplier import plancherel_ratio


class PlancherelParams(SymbolParams):
    trials: int = Field(default=10, ge=0)


class PlancherelCommand(BaseCommand):
    params_model = PlancherelParams

    @property
    def name(self) -> str:
        return "plancherel"

    @property
    def description(self) -> str:
        return "L²(ℓ²) sanity check: multiplier ratios never exceed sup_k ‖m(k)‖"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_symbol_arguments(parser)
        parser.add_argument("--s", help="variation exponent of random symbols")
        parser.add_argument("--trials", type=int, help="number of random inputs")

    def execute(self, params: PlancherelParams, context: RunContext) -> Dict[str, Any]:
        symbol = build_symbol(params, context.seed)
        report = plancherel_ratio(symbol, params.trials, context.seed)
        context.writer.write_report("plancherel", {"params": params, "report": report})
        return {
            "max_ratio": report.max_ratio,
            "bound": report.bound,
            "argmax_frequency": report.argmax_frequency,
        }
