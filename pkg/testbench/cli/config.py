"""
Run configuration: an optional key=value or JSON file, overridden by CLI flags.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, Field

from testbench import __version__
from testbench.core.config import settings
from testbench.core.exceptions import ArtifactIOError
from testbench.infrastructure.serialization import to_jsonable

RUN_KEYS = ("seed", "threads", "output_dir", "allow_violation")


class RunConfig(BaseModel):
    command: str
    params: Dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)
    threads: Optional[int] = Field(default=None, ge=1)
    output_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR)
    allow_violation: bool = False


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a flat configuration file.

    `.json` files hold one JSON object; anything else is read as key=value
    lines with python-dotenv (comments and quoting allowed).
    """
    source = Path(path)
    if not source.is_file():
        raise ArtifactIOError(f"config file {path} does not exist")
    if source.suffix.lower() == ".json":
        try:
            values = json.loads(source.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ArtifactIOError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(values, dict):
            raise ArtifactIOError(f"config file {path} must hold a JSON object")
    else:
        try:
            values = dotenv_values(source)
        except OSError as exc:
            raise ArtifactIOError(f"cannot read config file {path}: {exc}") from exc
    return {_normalize_key(key): value for key, value in values.items() if value is not None}


def build_run_config(
    command: str, file_values: Dict[str, Any], flag_values: Dict[str, Any]
) -> RunConfig:
    """Merge file values and CLI flags (flags win) into a RunConfig."""
    merged = {**file_values, **{_normalize_key(k): v for k, v in flag_values.items()}}
    merged.pop("command", None)  # the subcommand on the command line decides
    run_values = {key: merged.pop(key) for key in RUN_KEYS if merged.get(key) is not None}
    for key in RUN_KEYS:
        merged.pop(key, None)
    return RunConfig(command=command, params=merged, **run_values)


def config_digest(command: str, params: BaseModel, seed: int) -> str:
    """
    sha256 prefix of the validated configuration.

    Thread count and output directory do not enter: they never change results.
    """
    payload = {
        "command": command,
        "params": to_jsonable(params.model_dump(mode="json")),
        "seed": seed,
        "version": __version__,
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
