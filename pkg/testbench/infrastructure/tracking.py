import numbers
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional

from testbench.core.config import settings
from testbench.core.logger import log


class ExperimentRun:
    """Handle yielded by `experiment_run`; every call is a no-op when tracking is off."""

    def __init__(self, client=None):
        self._mlflow = client

    @property
    def active(self) -> bool:
        return self._mlflow is not None

    def log_metrics(self, metrics: Dict[str, Any]):
        if not self.active:
            return
        for key, value in sorted(metrics.items()):
            if isinstance(value, numbers.Real) and not isinstance(value, bool):
                self._mlflow.log_metric(key, float(value))

    def log_artifact(self, path: str):
        if self.active:
            self._mlflow.log_artifact(path)


@contextmanager
def experiment_run(
    command: str, params: Dict[str, Any], tracking_uri: Optional[str] = None
) -> Iterator[ExperimentRun]:
    """
    Context manager for MLflow tracking of one CLI command.

    Args:
        command: subcommand name, used as run name and tag
        params: flattened run configuration

    Usage:
        with experiment_run("lpr", {"p": "4", "seed": 0}) as run:
            run.log_metrics({"max_ratio": 1.3})
    """
    uri = settings.MLFLOW_TRACKING_URI if tracking_uri is None else tracking_uri
    if not uri:
        yield ExperimentRun()
        return

    import mlflow

    mlflow.set_tracking_uri(uri)
    mlflow.set_experiment(settings.MLFLOW_EXPERIMENT)
    with mlflow.start_run(run_name=command):
        mlflow.set_tag("command", command)
        for key, value in sorted(params.items()):
            mlflow.log_param(key, str(value)[:250])
        log.info("Tracking run started", command=command, tracking_uri=uri)
        yield ExperimentRun(mlflow)
