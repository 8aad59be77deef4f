import argparse
from typing import Any, Dict, Literal

from pydantic import BaseModel, Field

from testbench.cli.base import BaseCommand, RunContext
from testbench.domain.exponent import INF
from testbench.harmonic.counterexample import tk_family, tk_quantity, tk_witness
from testbench.harmonic.op_bounds import estimate_lrs_bound

HEADER = ["n", "s", "p", "lhs", "rhs", "rhs_exact", "lower_bound"]


class CounterexampleParams(BaseModel):
    kind: Literal["tk"] = "tk"
    n: int = Field(default=8, ge=1)
    s: float = Field(default=2.0, ge=1)
    p: float = Field(default=2.0, ge=1)
    budget: int = Field(default=0, ge=0)
    grid_points: int = Field(default=0, ge=0)


class CounterexampleCommand(BaseCommand):
    params_model = CounterexampleParams

    @property
    def name(self) -> str:
        return "counterexample"

    @property
    def description(self) -> str:
        return "ℓˢ-bounded averaging family that is not ℓ^∞(ℓˢ)-bounded"

    @property
    def columns(self) -> str:
        return "counterexample.csv: " + ", ".join(HEADER)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("kind", nargs="?", choices=["tk"])
        parser.add_argument("--n", type=int, help="number of operators T_1 ... T_n")
        parser.add_argument("--s", type=float, help="inner exponent")
        parser.add_argument("--p", type=float, help="Lebesgue exponent")
        parser.add_argument(
            "--budget",
            type=int,
            help="when positive, also estimate the ℓˢ and ℓ^∞(ℓˢ) bounds of the family",
        )
        parser.add_argument("--grid-points", type=int, help="grid of the discretized family")

    def execute(self, params: CounterexampleParams, context: RunContext) -> Dict[str, Any]:
        result = tk_quantity(params.n, params.s, params.p)
        context.writer.write_table(
            "counterexample",
            HEADER,
            [[getattr(result, column) for column in HEADER]],
        )
        report: Dict[str, Any] = {"params": params, "result": result}
        summary: Dict[str, Any] = {
            "lhs": result.lhs,
            "rhs": result.rhs,
            "lower_bound": result.lower_bound,
        }
        if params.budget > 0:
            grid = params.grid_points or None
            family = tk_family(params.n, grid, params.p)
            witness = tk_witness(params.n, grid)
            estimates = {}
            for label, r in (("ls", params.s), ("linf_ls", INF)):
                estimate = estimate_lrs_bound(
                    family,
                    r,
                    params.s,
                    params.budget,
                    context.seed,
                    seed_witnesses=[witness],
                    threads=context.threads,
                )
                estimates[label] = estimate.model_dump(exclude={"witness"})
                summary[f"{label}_estimate"] = estimate.bound
            report["estimates"] = estimates
        context.writer.write_report("counterexample", report)
        return summary
