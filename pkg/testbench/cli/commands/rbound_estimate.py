import argparse
from typing import Any, Dict, Optional

from pydantic import Field

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import FamilyParams, add_family_arguments, build_family
from testbench.harmonic.op_bounds import estimate_r_bound


class RboundParams(FamilyParams):
    budget: int = Field(default=1000, ge=1)
    iterations: Optional[int] = Field(default=None, ge=1)


class RboundEstimateCommand(BaseCommand):
    params_model = RboundParams

    @property
    def name(self) -> str:
        return "rbound-estimate"

    @property
    def description(self) -> str:
        return "Randomized lower bound for the R-bound of an operator family"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_family_arguments(parser)
        parser.add_argument("--budget", type=int, help="objective evaluations for restarts")
        parser.add_argument("--iterations", type=int, help="ascent iterations per restart")

    def execute(self, params: RboundParams, context: RunContext) -> Dict[str, Any]:
        family = build_family(params, context.seed)
        estimate = estimate_r_bound(
            family, params.budget, context.seed, params.iterations, context.threads
        )
        context.writer.write_report("rbound_estimate", {"params": params, "estimate": estimate})
        return {
            "bound": estimate.bound,
            "evaluations": estimate.evaluations,
            "exact_expectation": estimate.exact_expectation,
        }
