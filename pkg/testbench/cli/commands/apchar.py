import argparse
from typing import Any, Dict, Literal, Optional

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import WeightParams, add_weight_arguments, build_weight
from testbench.core.exceptions import InvalidParameterError
from testbench.domain.exponent import ExponentField
from testbench.harmonic.mixed_norms import alpha_characteristic, ap_characteristic


class ApcharParams(WeightParams):
    weight: Literal["power", "file"] = "power"
    n_points: int = 256
    p: ExponentField = 2
    weight_class: Literal["A", "alpha"] = "A"
    q: Optional[ExponentField] = None


class ApcharCommand(BaseCommand):
    params_model = ApcharParams

    @property
    def name(self) -> str:
        return "apchar"

    @property
    def description(self) -> str:
        return "Muckenhoupt A_p or α_{p,q} characteristic of a weight"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_weight_arguments(parser)
        parser.add_argument("--n-points", type=int, help="grid size of a power weight")
        parser.add_argument("--p", help="class exponent")
        parser.add_argument("--weight-class", choices=["A", "alpha"])
        parser.add_argument("--q", help="second exponent of α_{p,q}")

    def execute(self, params: ApcharParams, context: RunContext) -> Dict[str, Any]:
        weight = build_weight(params, params.n_points)
        if params.weight_class == "alpha":
            if params.q is None:
                raise InvalidParameterError("--weight-class alpha needs --q")
            value = alpha_characteristic(weight, params.p, params.q)
        else:
            value = ap_characteristic(weight, params.p, threads=context.threads)
        context.writer.write_report(
            "apchar", {"params": params, "characteristic": value, "weight": weight.metadata}
        )
        return {"characteristic": value, "n_points": weight.n_points}
