"""
Logging setup for reconstruction runs.

This module configures the standard `logging` package from `core.config.settings`
and provides helpers that tag every record of an experiment run with a short
run id, so interleaved runs (or a run and its CLI wrapper) can be told apart.

Functions:
    configure_logging(level: Optional[str] = None) -> None:
        Installs the stderr handler (and the optional file handler) once.

    new_run_id() -> str:
        Returns a short unique run identifier.

    get_run_logger(run_id: str, name: str = "experiments") -> logging.LoggerAdapter:
        Returns a logger adapter that prefixes records with the run id.

    stage_timer(stage: str, log, timings: Optional[Dict[str, float]] = None):
        Context manager logging start/completion of a pipeline stage with its
        elapsed wall time.

Configuration:
    Level, file logging and file name come from settings (LOG_LEVEL,
    LOG_TO_FILE, LOG_FILE). All output goes to standard error so standard
    output stays machine readable.
"""
import logging
import time
import uuid
from contextlib import contextmanager
from typing import Dict, Iterator, Optional, Union

from core.config import settings

_configured = False


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger from settings. Safe to call more than once."""
    global _configured
    if _configured:
        if level:
            logging.getLogger().setLevel(getattr(logging, level.upper()))
        return

    handlers = [logging.StreamHandler()]
    if settings.LOG_TO_FILE:
        handlers.append(logging.FileHandler(settings.LOG_FILE))

    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL).upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
    )
    _configured = True


class RunLoggerAdapter(logging.LoggerAdapter):
    """Prefixes each message with the run id held in `extra`."""

    def process(self, msg, kwargs):
        return f"[run {self.extra['run_id']}] {msg}", kwargs


def new_run_id() -> str:
    return uuid.uuid4().hex[:8]


def get_run_logger(run_id: str, name: str = "experiments") -> RunLoggerAdapter:
    """
    Return a logger with run id context.

    Args:
        run_id: Identifier shared by every record of one experiment run
        name: Logger name

    Returns:
        Logger adapter prefixing records with the run id
    """
    return RunLoggerAdapter(logging.getLogger(name), {"run_id": run_id})


@contextmanager
def stage_timer(
    stage: str,
    log: Union[logging.Logger, logging.LoggerAdapter],
    timings: Optional[Dict[str, float]] = None,
) -> Iterator[None]:
    """
    Log start and completion of a pipeline stage.

    Args:
        stage: Stage name as it appears in logs and in the run summary
        log: Logger or adapter to write to
        timings: Optional mapping receiving the elapsed seconds under `stage`
    """
    start_time = time.time()
    log.debug("Stage %s started", stage)
    try:
        yield
    except Exception:
        log.error("Stage %s failed after %.4fs", stage, time.time() - start_time)
        raise
    process_time = time.time() - start_time
    if timings is not None:
        timings[stage] = process_time
    log.info("Stage %s completed | Process time: %.4fs", stage, process_time)
