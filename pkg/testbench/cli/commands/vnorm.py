import argparse
from typing import Any, Dict, Optional

from pydantic import Field

from testbench.cli.base import BaseCommand, RunContext
from testbench.cli.inputs import SymbolParams, add_symbol_arguments, build_symbol
from testbench.domain.exponent import is_inf
from testbench.harmonic.gauges import default_gauge
from testbench.harmonic.torus_grid import dyadic_partition
from testbench.harmonic.variation import block_vs_norm, holder_quantity, variation_path

HEADER = [
    "block_lo",
    "block_hi",
    "sup",
    "variation",
    "vs_norm",
    "partition_size",
    "holder_bound",
]

class VnormParams(SymbolParams):
    holder_alpha: Optional[float] = Field(default=None, gt=0, le=1)


class VnormCommand(BaseCommand):
    params_model = VnormParams

    @property
    def name(self) -> str:
        return "vnorm"

    @property
    def description(self) -> str:
        return "V^s norm of a symbol, block by block"

    @property
    def columns(self) -> str:
        return "vnorm.csv: " + ", ".join(HEADER)

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        add_symbol_arguments(parser)
        parser.add_argument("--s", help="variation exponent in [1, inf]")
        parser.add_argument("--holder-alpha", type=float, help="also report |J|^α[m]_{C^α}")

    def execute(self, params: VnormParams, context: RunContext) -> Dict[str, Any]:
        symbol = build_symbol(params, context.seed)
        gauge = default_gauge(symbol.dimension)
        finite = not is_inf(params.s)
        rows = []
        for interval in dyadic_partition(symbol.n_points).blocks:
            block = symbol.block(interval, gauge)
            sup = float(gauge.sup(block.entries))
            variation, path = variation_path(block, params.s) if finite else (0.0, [])
            holder = None
            if params.holder_alpha is not None and block.length > 1:
                holder = holder_quantity(block, params.holder_alpha).bound
            norm = block_vs_norm(block, params.s)
            rows.append([interval.lo, interval.hi, sup, variation, norm, len(path), holder])
        context.writer.write_table("vnorm", HEADER, rows)
        total = max(row[4] for row in rows)
        context.writer.write_report(
            "vnorm", {"vs_norm": total, "params": params, "gauge": gauge.name}
        )
        return {"vs_norm": total, "blocks": len(rows)}
