import argparse
from typing import Any, Dict

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import ExperimentParams, add_experiment_arguments
from testbench.core.exceptions import HypothesisViolationError
from testbench.domain.exponent import compare, conjugate, format_exponent
from testbench.harmonic.multiplier import lpr_experiment

TRIAL_COLUMNS = ["trial", "n_points", "p", "q", "alpha", "ap_char", "ratio"]


class LprCommand(BaseCommand):
    params_model = ExperimentParams

    @property
    def name(self) -> str:
        return "lpr"

    @property
    def description(self) -> str:
        return "Square-function ratios over random disjoint interval families"

    @property
    def columns(self) -> str:
        return "lpr.csv: " + ", ".join(TRIAL_COLUMNS)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_experiment_arguments(parser)

    def execute(self, params: ExperimentParams, context: RunContext) -> Dict[str, Any]:
        config = params.to_config(context.seed, context.threads)
        q_dual = conjugate(config.q)
        if compare(config.p, q_dual) <= 0 and not context.allow_violation:
            raise HypothesisViolationError(
                f"LPR estimate needs p > q', got p={format_exponent(config.p)}, "
                f"q'={format_exponent(q_dual)}",
                theorem="lpr",
            )
        report = lpr_experiment(config)
        rows = [[getattr(record, column) for column in TRIAL_COLUMNS] for record in report.trials]
        context.writer.write_table("lpr", TRIAL_COLUMNS, rows)
        context.writer.write_report(
            "lpr",
            {
                "config": config.model_dump(exclude={"threads"}),
                "report": report.model_dump(exclude={"trials"}),
            },
        )
        return {
            "max_ratio": report.max_ratio,
            "median_ratio": report.median_ratio,
            "hypothesis_ok": report.hypothesis_ok,
            "umd_ok": report.umd_ok,
        }
