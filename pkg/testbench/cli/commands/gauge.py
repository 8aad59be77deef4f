import argparse
import json
from typing import Any, Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, field_validator

from testbench.cli.base import BaseCommand, RunContext
from testbench.core.exceptions import InvalidParameterError
from testbench.domain.spaces import SpaceSpec
from testbench.harmonic.gauges import AbsoluteGauge, MinkowskiGauge, OperatorNormGauge
from testbench.infrastructure.serialization import read_json


class GaugeParams(BaseModel):
    kind: Literal["operator", "minkowski", "absolute"] = "operator"
    matrix: str
    space_in: str = "l2:2"
    space_out: Optional[str] = None
    family_file: Optional[str] = None

    @field_validator("matrix")
    @classmethod
    def _json_matrix(cls, value: str) -> str:
        try:
            json.loads(value)
        except json.JSONDecodeError as exc:
            raise ValueError(f"--matrix must be a JSON array, got {value!r}") from exc
        return value


def _parse_complex(value) -> np.ndarray:
    """Nested lists of numbers or "a+bj" strings."""
    if isinstance(value, list):
        return np.array([_parse_complex(item) for item in value], dtype=complex)
    return np.complex128(complex(value))


class GaugeCommand(BaseCommand):
    params_model = GaugeParams

    @property
    def name(self) -> str:
        return "gauge"

    @property
    def description(self) -> str:
        return "Operator-norm, Minkowski or absolute gauge of a matrix"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--kind", choices=["operator", "minkowski", "absolute"])
        parser.add_argument("--matrix", help='JSON array, e.g. "[[1, 0], [0, 2]]"')
        parser.add_argument("--space-in", help='mixed space of the domain, e.g. "l3:2(l2:2)"')
        parser.add_argument("--space-out", help="mixed space of the codomain (default: --space-in)")
        parser.add_argument("--family-file", help='JSON {"matrices": [...]} for --kind minkowski')

    def execute(self, params: GaugeParams, context: RunContext) -> Dict[str, Any]:
        matrix = _parse_complex(json.loads(params.matrix))
        if params.kind == "absolute":
            gauge = AbsoluteGauge()
        elif params.kind == "minkowski":
            if not params.family_file:
                raise InvalidParameterError("--kind minkowski needs --family-file")
            gauge = MinkowskiGauge(_parse_complex(read_json(params.family_file)["matrices"]))
        else:
            spec_in = SpaceSpec.parse(params.space_in)
            spec_out = SpaceSpec.parse(params.space_out) if params.space_out else spec_in
            gauge = OperatorNormGauge(spec_in, spec_out, seed=context.seed)
        result = gauge.evaluate(matrix)
        context.writer.write_report(
            "gauge", {"params": params, "gauge": gauge.name, "result": result}
        )
        return {"gauge": gauge.name, "value": result.value, "status": result.status}
