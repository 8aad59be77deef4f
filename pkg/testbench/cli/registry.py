from typing import Dict, List

from testbench.cli.base import BaseCommand
from testbench.core.exceptions import InvalidParameterError


class CommandRegistry:
    """
    Registry of the available subcommands, in registration order.
    """

    def __init__(self):
        self._commands: Dict[str, BaseCommand] = {}
        self._initialize_defaults()

    def _initialize_defaults(self):
        """Register the built-in subcommands."""
        from testbench.cli.commands import DEFAULT_COMMANDS

        for command_cls in DEFAULT_COMMANDS:
            self.register(command_cls())

    def register(self, command: BaseCommand):
        self._commands[command.name] = command

    def get_command(self, name: str) -> BaseCommand:
        command = self._commands.get(name)
        if command is None:
            raise InvalidParameterError(
                f"unknown command '{name}'; choose one of {', '.join(self.list_commands())}"
            )
        return command

    def list_commands(self) -> List[str]:
        """List all registered command names."""
        return list(self._commands.keys())

    def commands(self) -> List[BaseCommand]:
        return list(self._commands.values())


# Global instance
command_registry = CommandRegistry()
