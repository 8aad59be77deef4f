import argparse
from typing import Any, Dict, Optional

from pydantic import Field

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import FamilyParams, add_family_arguments, build_family
from testbench.domain.exponent import ExponentField, conjugate
from testbench.harmonic.counterexample import tk_witness
from testbench.harmonic.op_bounds import dualize_family, estimate_lrs_bound
from testbench.infrastructure.serialization import witness_to_dict


class LrsParams(FamilyParams):
    r: ExponentField = 2
    s: ExponentField = 2
    budget: int = Field(default=1000, ge=1)
    iterations: Optional[int] = Field(default=None, ge=1)
    dual: bool = False


class LrsEstimateCommand(BaseCommand):
    params_model = LrsParams

    @property
    def name(self) -> str:
        return "lrs-estimate"

    @property
    def description(self) -> str:
        return "Randomized lower bound for the ℓʳ(ℓˢ)-bound of an operator family"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_family_arguments(parser)
        parser.add_argument("--r", help="outer exponent")
        parser.add_argument("--s", help="inner exponent")
        parser.add_argument("--budget", type=int, help="objective evaluations for restarts")
        parser.add_argument("--iterations", type=int, help="ascent iterations per restart")
        parser.add_argument(
            "--dual", action="store_true", help="also estimate the adjoint family at (r', s')"
        )

    def execute(self, params: LrsParams, context: RunContext) -> Dict[str, Any]:
        family = build_family(params, context.seed)
        seeds = [tk_witness(params.n, params.grid_points)] if params.family == "tk" else None
        estimate = estimate_lrs_bound(
            family,
            params.r,
            params.s,
            params.budget,
            context.seed,
            seed_witnesses=seeds,
            iterations=params.iterations,
            threads=context.threads,
        )
        report: Dict[str, Any] = {
            "params": params,
            "estimate": estimate.model_dump(exclude={"witness"}),
            "witness": witness_to_dict(estimate.witness),
        }
        summary = {"bound": estimate.bound, "evaluations": estimate.evaluations}
        if params.dual:
            dual = estimate_lrs_bound(
                dualize_family(family),
                conjugate(params.r),
                conjugate(params.s),
                params.budget,
                context.seed,
                iterations=params.iterations,
                threads=context.threads,
            )
            report["dual_estimate"] = dual.model_dump(exclude={"witness"})
            summary["dual_bound"] = dual.bound
        context.writer.write_report("lrs_estimate", report)
        return summary
