import argparse
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Type

from pydantic import BaseModel, ConfigDict

from testbench.reporting.writer import ArtifactWriter


class RunContext(BaseModel):
    """Run-wide settings handed to every command."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    seed: int
    threads: Optional[int] = None
    allow_violation: bool = False
    writer: ArtifactWriter


class BaseCommand(ABC):
    """
    Abstract Base Class for all subcommands.
    Enforces a strict contract for argument definition and execution.
    """

    params_model: Type[BaseModel]

    @property
    @abstractmethod
    def name(self) -> str:
        """The subcommand name (e.g., 'lrs-estimate')."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """One line shown in `testbench --help`."""
        pass

    @property
    def columns(self) -> str:
        """CSV columns written by the command, shown in its --help."""
        return ""

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """Register the command's flags; every flag must default to absent."""
        pass

    @abstractmethod
    def execute(self, params: BaseModel, context: RunContext) -> Dict[str, Any]:
        """
        The actual implementation of the command.
        Writes artifacts through `context.writer` and returns a serializable summary.
        """
        pass

    def parse_params(self, values: Dict[str, Any]) -> BaseModel:
        return self.params_model(**values)

    def epilog(self) -> str:
        if not self.columns:
            return ""
        return f"CSV columns: {self.columns}"
