import argparse
from typing import Any, Dict, Optional

from pydantic import BaseModel

from testbench.cli.base import BaseCommand, RunContext
from testbench.harmonic.exponents import (
    POLYGON_THEOREMS,
    ExponentParams,
    TheoremId,
    region_check,
    region_vertices,
    symmetry_check,
)

HEADER = ["region", "vertex", "vertex_x", "vertex_y", "edge_closed"]


class RegionParams(BaseModel):
    theorem: TheoremId
    p: Optional[str] = None
    q: Optional[str] = None
    r: Optional[str] = None
    s: Optional[str] = None
    theta: Optional[str] = None
    case: Optional[str] = None


def _figure_of(theorem: TheoremId) -> Optional[str]:
    for figure, members in POLYGON_THEOREMS.items():
        if theorem in members:
            return figure
    return None


class RegionCommand(BaseCommand):
    params_model = RegionParams

    @property
    def name(self) -> str:
        return "region"

    @property
    def description(self) -> str:
        return "Check exponents against a theorem's admissible region"

    @property
    def columns(self) -> str:
        return "region.csv: region, vertex, vertex_x, vertex_y, edge_closed (x = 1/p, y = 1/s)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--theorem", choices=[t.value for t in TheoremId])
        for name in ("p", "q", "r", "s"):
            parser.add_argument(f"--{name}", help=f"exponent {name} (rational or inf)")
        parser.add_argument("--theta", help="interpolation parameter in (0, 1)")
        parser.add_argument("--case", help="lr_small_s: i_a ... iii_b, lr_direct_sum: i or ii")

    def execute(self, params: RegionParams, context: RunContext) -> Dict[str, Any]:
        exponent_params = ExponentParams(
            theorem_id=params.theorem,
            p=params.p,
            q=params.q,
            r=params.r,
            s=params.s,
            theta=params.theta,
            case=params.case,
        )
        verdict = region_check(exponent_params)
        report: Dict[str, Any] = {"verdict": verdict, "params": params}

        figure = _figure_of(params.theorem)
        has_inputs = figure == "hscase" or (
            params.theta is not None and (figure == "intermediate" or params.q is not None)
        )
        if figure is not None and has_inputs:
            polygons = region_vertices(figure, params.theta, params.q)
            rows = []
            for region, polygon in (
                ("weighted", polygons.weighted),
                ("unweighted", polygons.unweighted),
            ):
                edges = zip(polygon.vertices, polygon.closed_edges)
                for index, ((x, y), closed) in enumerate(edges):
                    rows.append([region, index, float(x), float(y), closed])
            context.writer.write_table("region", HEADER, rows)
            report["ticks"] = polygons.ticks
            if figure != "hscase":
                report["symmetry"] = symmetry_check(params.theta, params.q or 1)

        context.writer.write_report("region", report)
        return {
            "theorem": params.theorem.value,
            "status": verdict.status,
            "weight_class": verdict.weight_class,
            "binding_constraints": verdict.binding_constraints,
        }
