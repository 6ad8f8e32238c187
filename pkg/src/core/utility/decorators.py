"""
This module provides decorators for
handling exceptions in pipeline stages and command handlers, ensuring consistent error reporting.

Decorators:
    handle_stage_errors(stage: str) -> Callable:
        Wraps a pipeline stage so that any failure is re-raised as a StageError
        naming the stage and the source location where the failure was raised.

    handle_command_errors(func: Callable) -> Callable:
        Wraps a command handler returning an exit code. On exception, builds an
        ErrorReport, writes it to standard error and returns its exit code
        (1 for usage/configuration errors, 2 for runtime failures).

Helper Functions:
    failure_site(exc: Exception) -> str:
        "file:line" of the innermost traceback frame outside these wrappers.
"""
import logging
import sys
import traceback
from functools import wraps
from typing import Callable

from core.exceptions import ConfigError, StageError, UnknownShapeError
from core.utility.reports.models import ErrorReport

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_RUNTIME = 2

USAGE_ERRORS = (ConfigError, UnknownShapeError)


def failure_site(exc: Exception) -> str:
    for frame in reversed(traceback.extract_tb(exc.__traceback__)):
        if not frame.name.endswith("_wrapper"):
            return f"{frame.filename.rsplit('/', 1)[-1]}:{frame.lineno or 0}"
    return "unknown"


def handle_stage_errors(stage: str) -> Callable:
    """
    Decorator factory naming the pipeline stage a function implements.
    Failures surface as StageError; a StageError from a nested stage passes through.
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def stage_wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except StageError:
                raise
            except Exception as e:  # pylint: disable=broad-except
                raise StageError(
                    stage, f"{type(e).__name__}: {e}", location=failure_site(e)
                ) from e

        return stage_wrapper

    return decorator


def _exit_code_for(exc: Exception) -> int:
    cause = exc.__cause__ if isinstance(exc, StageError) and exc.__cause__ else exc
    if isinstance(cause, USAGE_ERRORS):
        return EXIT_USAGE
    return EXIT_RUNTIME


def error_report(exc: Exception) -> ErrorReport:
    if isinstance(exc, StageError):
        return ErrorReport(
            message=exc.message,
            stage=exc.stage,
            location=exc.location,
            exit_code=_exit_code_for(exc),
        )
    return ErrorReport(
        message=f"{type(exc).__name__}: {exc}",
        location=failure_site(exc),
        exit_code=_exit_code_for(exc),
    )


def handle_command_errors(func: Callable) -> Callable:
    """
    Wrap a command handler so that it always returns an exit code.
    Errors are reported on standard error, never on standard output.
    """

    @wraps(func)
    def command_wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except Exception as e:  # pylint: disable=broad-except
            report = error_report(e)
            logger.debug("%s failed", func.__name__, exc_info=True)
            for line in report.render():
                print(line, file=sys.stderr)
            return report.exit_code

    return command_wrapper
