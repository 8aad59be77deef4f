import logging
import sys
from contextvars import ContextVar

import structlog

from testbench.core.config import settings

# Context variables for run-scoped data
run_id: ContextVar[str] = ContextVar("run_id", default="")
config_digest: ContextVar[str] = ContextVar("config_digest", default="")


def configure_structlog() -> structlog.stdlib.BoundLogger:
    """
    Configure structlog with a JSON renderer for production and console for dev.

    Log output goes to stderr; stdout is reserved for command results.
    """
    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.stdlib.add_logger_name,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if settings.JSON_LOGS or settings.ENV == "production":
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    )

    return structlog.get_logger("testbench")


log = configure_structlog()


def get_logger_with_context(**kwargs) -> structlog.stdlib.BoundLogger:
    """
    Get a logger with additional context bound to it.

    Usage:
        logger = get_logger_with_context(command="lpr", seed=0)
        logger.info("Trial finished", trial=3, ratio=1.2)
    """
    return log.bind(**kwargs)


def set_run_context(run_id_val: str, config_digest_val: str = None):
    """
    Set context variables for the current CLI run.

    Called once per `run`; the values are merged into every log event.
    """
    run_id.set(run_id_val)
    structlog.contextvars.bind_contextvars(run_id=run_id_val)
    if config_digest_val:
        config_digest.set(config_digest_val)
        structlog.contextvars.bind_contextvars(config_digest=config_digest_val)


def clear_run_context():
    structlog.contextvars.clear_contextvars()
