import argparse
from typing import Any, Dict

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import SymbolParams, add_symbol_arguments, build_symbol
from testbench.domain.exponent import ExponentField
from testbench.harmonic.gauges import default_gauge
from testbench.harmonic.torus_grid import dyadic_partition
from testbench.harmonic.variation import atomic_decompose, block_vs_norm, validate_decomposition
from testbench.infrastructure.serialization import decomposition_to_dict

HEADER = [
    "block_lo",
    "block_hi",
    "vs_norm",
    "atoms",
    "l1_mass",
    "mass_ratio",
    "max_error",
    "valid",
]


class AtomsParams(SymbolParams):
    s: ExponentField = "3/2"
    q: ExponentField = 2


class AtomsCommand(BaseCommand):
    params_model = AtomsParams

    @property
    def name(self) -> str:
        return "atoms"

    @property
    def description(self) -> str:
        return "R^q atomic decomposition of a V^s symbol on every dyadic block"

    @property
    def columns(self) -> str:
        return "atoms.csv: " + ", ".join(HEADER)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_symbol_arguments(parser)
        parser.add_argument("--s", help="variation exponent of the symbol")
        parser.add_argument("--q", help="atom exponent, q > s")

    def execute(self, params: AtomsParams, context: RunContext) -> Dict[str, Any]:
        symbol = build_symbol(params, context.seed)
        gauge = default_gauge(symbol.dimension)
        rows = []
        decompositions = []
        for interval in dyadic_partition(symbol.n_points).blocks:
            block = symbol.block(interval, gauge)
            decomposition = atomic_decompose(block, params.s, params.q)
            check = validate_decomposition(decomposition, block)
            norm = block_vs_norm(block, params.s)
            ratio = decomposition.l1_mass / norm if norm > 0 else 0.0
            rows.append(
                [
                    interval.lo,
                    interval.hi,
                    norm,
                    len(decomposition.atoms),
                    decomposition.l1_mass,
                    ratio,
                    check.max_reconstruction_error,
                    check.valid,
                ]
            )
            decompositions.append(
                {"block": [interval.lo, interval.hi], **decomposition_to_dict(decomposition)}
            )
        context.writer.write_table("atoms", HEADER, rows)
        context.writer.write_report("atoms", {"params": params, "blocks": decompositions})
        return {
            "blocks": len(rows),
            "all_valid": all(row[-1] for row in rows),
            "max_mass_ratio": max(row[5] for row in rows),
        }
