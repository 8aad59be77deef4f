from typing import Optional

from prometheus_client import Counter, Gauge, Histogram, write_to_textfile
from prometheus_client.core import CollectorRegistry

from testbench.core.config import settings
from testbench.core.logger import log

# Custom registry so library use never touches the global default one
registry = CollectorRegistry()

testbench_evaluations_total = Counter(
    "testbench_evaluations_total",
    "Number of objective evaluations performed by estimators",
    ["operation"],  # operation: lrs, rbound, gauge_ascent
    registry=registry,
)

testbench_lp_solves_total = Counter(
    "testbench_lp_solves_total",
    "Number of linear programs solved for Minkowski gauges",
    ["status"],  # status: optimal, failed
    registry=registry,
)

testbench_trials_total = Counter(
    "testbench_trials_total",
    "Number of experiment trials completed",
    ["experiment"],
    registry=registry,
)

testbench_command_duration_seconds = Histogram(
    "testbench_command_duration_seconds",
    "Wall time of CLI commands",
    ["command", "status"],
    buckets=[0.01, 0.1, 0.5, 1.0, 5.0, 15.0, 60.0, 300.0],
    registry=registry,
)

testbench_last_bound = Gauge(
    "testbench_last_bound",
    "Most recent bound reported by an estimator",
    ["operation"],
    registry=registry,
)


def record_evaluations(operation: str, count: int):
    testbench_evaluations_total.labels(operation=operation).inc(count)


def record_lp_solve(status: str):
    testbench_lp_solves_total.labels(status=status).inc()


def record_trials(experiment: str, count: int = 1):
    testbench_trials_total.labels(experiment=experiment).inc(count)


def record_bound(operation: str, value: float):
    """
    Record the latest bound of an estimator.

    Args:
        operation: estimator name (lrs, rbound, ...)
        value: reported lower bound
    """
    testbench_last_bound.labels(operation=operation).set(value)
    log.debug("Bound recorded", operation=operation, value=value)


def record_command(command: str, success: bool, duration: float):
    status = "success" if success else "fail"
    testbench_command_duration_seconds.labels(command=command, status=status).observe(duration)
    log.info("Command finished", command=command, status=status, duration=round(duration, 3))


def export_metrics(path: Optional[str] = None) -> Optional[str]:
    """Write the registry in text exposition format when a target is configured."""
    target = path or settings.METRICS_FILE
    if not target:
        return None
    write_to_textfile(target, registry)
    log.info("Metrics exported", path=target)
    return target
