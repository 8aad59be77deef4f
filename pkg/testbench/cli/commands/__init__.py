from testbench.cli.commands.apchar import ApcharCommand
from testbench.cli.commands.atoms import AtomsCommand
from testbench.cli.commands.counterexample import CounterexampleCommand
from testbench.cli.commands.gauge import GaugeCommand
from testbench.cli.commands.lpr import LprCommand
from testbench.cli.commands.lrs_estimate import LrsEstimateCommand
from testbench.cli.commands.multiplier import MultiplierCommand
from testbench.cli.commands.plancherel import PlancherelCommand
from testbench.cli.commands.rbound_estimate import RboundEstimateCommand
from testbench.cli.commands.region import RegionCommand
from testbench.cli.commands.vnorm import VnormCommand

DEFAULT_COMMANDS = [
    RegionCommand,
    VnormCommand,
    AtomsCommand,
    GaugeCommand,
    ApcharCommand,
    LrsEstimateCommand,
    RboundEstimateCommand,
    CounterexampleCommand,
    LprCommand,
    MultiplierCommand,
    PlancherelCommand,
]

__all__ = [command.__name__ for command in DEFAULT_COMMANDS] + ["DEFAULT_COMMANDS"]
