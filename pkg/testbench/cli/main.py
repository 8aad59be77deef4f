"""
Entry point of the `testbench` command line.

Results go to stdout as one JSON summary, artifacts to the output directory
and logs to stderr. Exit codes: 0 success, 2 invalid input, 3 theorem
hypothesis violated, 4 artifact I/O failure.
"""

import argparse
import json
import sys
import time
import uuid
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from testbench import __version__
from testbench.cli.base import RunContext
from testbench.cli.config import RunConfig, build_run_config, config_digest, load_config_file
from testbench.cli.registry import command_registry
from testbench.core.exceptions import (
    ArtifactIOError,
    HypothesisViolationError,
    TestbenchError,
)
from testbench.core.logger import (
    clear_run_context,
    get_logger_with_context,
    log,
    set_run_context,
)
from testbench.infrastructure.serialization import to_jsonable
from testbench.infrastructure.tracking import experiment_run
from testbench.observability.metrics import export_metrics, record_command
from testbench.reporting.writer import ArtifactWriter

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_HYPOTHESIS = 3
EXIT_IO = 4


def _add_global_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value or .json file with run and command parameters")
    parser.add_argument("--output-dir", help="directory for CSV and JSON artifacts")
    parser.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    parser.add_argument("--seed", type=int, help="master seed of every random stream")
    parser.add_argument(
        "--allow-violation",
        action="store_true",
        help="run even when the exponents violate the theorem hypotheses",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="testbench",
        description="Numerical testbench for vector-valued Fourier multiplier bounds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    for command in command_registry.commands():
        sub = subparsers.add_parser(
            command.name,
            help=command.description,
            description=command.description,
            epilog=command.epilog() or None,
            argument_default=argparse.SUPPRESS,
        )
        _add_global_arguments(sub)
        command.add_arguments(sub)
    return parser


def _error_code(exc: Exception) -> int:
    if isinstance(exc, HypothesisViolationError):
        return EXIT_HYPOTHESIS
    if isinstance(exc, ArtifactIOError):
        return EXIT_IO
    return EXIT_INVALID


def _describe(exc: Exception) -> str:
    if isinstance(exc, TestbenchError):
        return exc.message
    return str(exc)


def run(config: RunConfig) -> int:
    """Execute one configured command and return its exit code."""
    start = time.perf_counter()
    success = False
    try:
        command = command_registry.get_command(config.command)
        params = command.parse_params(config.params)
        digest = config_digest(command.name, params, config.seed)
        set_run_context(uuid.uuid4().hex[:12], digest)
        writer = ArtifactWriter(
            config.output_dir, stamp={"config_digest": digest, "version": __version__}
        )
        context = RunContext(
            seed=config.seed,
            threads=config.threads,
            allow_violation=config.allow_violation,
            writer=writer,
        )
        tracked = {**params.model_dump(mode="json"), "seed": config.seed, "digest": digest}
        logger = get_logger_with_context(command=command.name)
        logger.info("Command started", seed=config.seed)
        with experiment_run(command.name, tracked) as tracking:
            summary = command.execute(params, context)
            tracking.log_metrics(summary)
            for path in writer.written:
                tracking.log_artifact(str(path))
        logger.info("Command finished", files=[path.name for path in writer.written])
        payload = {"command": command.name, "config_digest": digest, **summary}
        print(json.dumps(to_jsonable(payload), sort_keys=True))
        success = True
        return EXIT_OK
    except (TestbenchError, ValidationError) as exc:
        code = _error_code(exc)
        log.error("Command failed", command=config.command, exit_code=code, error=_describe(exc))
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return code
    finally:
        record_command(config.command, success, time.perf_counter() - start)
        try:
            export_metrics()
        except OSError as exc:
            log.warning("Metrics export failed", error=str(exc))
        clear_run_context()


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    namespace = parser.parse_args(argv)
    values: Dict[str, Any] = vars(namespace)
    command = values.pop("command")
    config_path = values.pop("config", None)
    try:
        file_values = load_config_file(config_path) if config_path else {}
        config = build_run_config(command, file_values, values)
    except (TestbenchError, ValidationError) as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return _error_code(exc)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
