#!/usr/bin/env python3
# coding: utf-8

# plonkalab - error_handling.py
# Error handling and logging utilities

import functools
import logging
import sys
import traceback
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from config import Severity

logger = logging.getLogger(__name__)


def setup_comprehensive_logging(log_level: str = "INFO"):
    """Setup comprehensive logging configuration"""

    level_map = {
        "DEBUG": logging.DEBUG,
        "INFO": logging.INFO,
        "WARNING": logging.WARNING,
        "ERROR": logging.ERROR,
        "CRITICAL": logging.CRITICAL,
    }

    log_level_int = level_map.get(str(log_level).upper(), logging.INFO)

    # stderr keeps stdout free for the machine section of reports
    logging.basicConfig(
        level=log_level_int,
        format="[%(asctime)s %(filename)s:%(lineno)d %(levelname).1s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )

    logging.getLogger("networkx").setLevel(logging.WARNING)
    logging.getLogger("hypothesis").setLevel(logging.WARNING)

    logger.debug(f"Logging configured with level: {log_level}")


def error_handler(func: Callable) -> Callable:
    """Decorator for general error handling"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PlonkaError as e:
            logger.warning(f"{type(e).__name__} in {func.__name__}: {e}")
            raise
        except Exception as e:
            logger.error(f"Error in {func.__name__}: {e}")
            logger.debug(f"Traceback: {traceback.format_exc()}")
            raise

    return wrapper


@dataclass(frozen=True)
class Diagnostic:
    """One violated law, with the tuple that witnesses it."""

    law: str
    message: str
    witness: tuple = ()
    severity: str = Severity.ERROR

    def __str__(self):
        where = f" witness={self.witness}" if self.witness else ""
        return f"[{self.severity}] {self.law}: {self.message}{where}"

    def as_dict(self) -> dict[str, Any]:
        return {
            "law": self.law,
            "message": self.message,
            "witness": [list(w) if isinstance(w, tuple) else w for w in self.witness],
            "severity": self.severity,
        }


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity == Severity.ERROR for d in diagnostics)


def raise_on_errors(diagnostics: list[Diagnostic], exc_type: type["PlonkaError"], what: str):
    errors = [d for d in diagnostics if d.severity == Severity.ERROR]
    if errors:
        for d in errors:
            logger.warning(str(d))
        raise exc_type(f"{what}: {errors[0]}", diagnostics=errors)


def describe_error(error: Exception) -> str:
    """Map an exception to a one-line message for the command line."""
    if isinstance(error, SizeCapExceeded):
        return f"Size cap exceeded: {error} (raise it with --cap or PLONKA_CAP)"
    if isinstance(error, ParseError):
        return f"Could not parse input: {error}"
    if isinstance(error, TermError):
        return f"Term does not fit the signature: {error}"
    if isinstance(error, ValidationError):
        return f"Validation failed: {error}"
    if isinstance(error, PlonkaError):
        return str(error)
    logger.error(f"Unhandled error: {error}")
    return f"Unexpected error: {error}"


class PlonkaError(Exception):
    """Base exception for workbench errors"""

    exit_code = 1

    def __init__(self, message: str = "", diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class ValidationError(PlonkaError):
    """Raised when a value breaks its structural invariants"""

    exit_code = 2


class InvalidSystem(ValidationError):
    pass


class InvalidSystemCongruence(ValidationError):
    pass


class NotAPartitionFunction(ValidationError):
    pass


class InconsistentTransitions(ValidationError):
    pass


class InjectivityViolation(ValidationError):
    pass


class ShapeMismatch(ValidationError):
    pass


class SignatureMismatch(ValidationError):
    pass


class PrematureRelation(ValidationError):
    """Raised when S_R is not contained in the supplied index congruence"""


class TrivialAlgebra(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class ProviderFailure(ValidationError):
    pass


class TermError(PlonkaError):
    exit_code = 2


class UnknownOperation(TermError):
    pass


class ArityMismatch(TermError):
    pass


class UnboundVariable(TermError):
    pass


class ParseError(PlonkaError):
    """Raised on malformed input; the message carries the field path or position"""

    exit_code = 3


class SizeCapExceeded(PlonkaError):
    exit_code = 4
