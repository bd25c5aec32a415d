"""
Error handling utilities for deerpsim.

Provides the exception hierarchy raised by the simulator and a decorator
that turns unexpected failures into logged, reportable errors.
"""

import logging
from enum import Enum
from functools import wraps
from typing import Any, Callable, Dict, List, Optional

from .logging_config import get_logger

logger = get_logger(__name__)


class ErrorSeverity(Enum):
    """Error severity levels."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class DeerpSimError(Exception):
    """Base exception for the simulator."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        user_message: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.severity = severity
        self.context = context or {}
        self.user_message = user_message or self._get_user_friendly_message()

    def _get_user_friendly_message(self) -> str:
        return self.message

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for logging and failure reports."""
        return {
            "error_code": self.error_code,
            "message": self.message,
            "user_message": self.user_message,
            "severity": self.severity.value,
            "context": self.context,
            "type": self.__class__.__name__,
        }


class ValidationError(DeerpSimError):
    """Raised when a scenario field fails validation."""

    def __init__(
        self,
        field: str,
        value: Any,
        message: Optional[str] = None,
        issues: Optional[List[str]] = None,
    ):
        self.field = field
        self.value = value
        self.issues = list(issues or [])
        error_message = message or f"Invalid value for {field}: {value}"
        super().__init__(
            error_message,
            error_code="VALIDATION_ERROR",
            severity=ErrorSeverity.LOW,
            context={"field": field, "value": str(value), "issues": self.issues},
        )

    def _get_user_friendly_message(self) -> str:
        if len(self.issues) > 1:
            return "Invalid scenario:\n  - " + "\n  - ".join(self.issues)
        return self.message


class ConfigurationError(DeerpSimError):
    """Raised when a configuration file or setting cannot be used."""

    def __init__(self, setting: str, value: Any = None, message: Optional[str] = None):
        self.setting = setting
        self.value = value

        error_message = message or f"Invalid configuration for {setting}"
        if value is not None and message is None:
            error_message += f": {value}"

        super().__init__(
            error_message,
            error_code="CONFIGURATION_ERROR",
            severity=ErrorSeverity.HIGH,
            context={
                "setting": setting,
                "value": None if value is None else str(value),
            },
        )


class FileProcessingError(DeerpSimError):
    """Raised when reading or writing an artifact fails."""

    def __init__(
        self,
        file_path: str,
        operation: str,
        original_error: Optional[Exception] = None,
    ):
        self.file_path = file_path
        self.operation = operation
        self.original_error = original_error

        message = f"Failed to {operation} file: {file_path}"
        if original_error:
            message += f" - {original_error}"

        super().__init__(
            message,
            error_code="FILE_PROCESSING_ERROR",
            severity=ErrorSeverity.MEDIUM,
            context={
                "file_path": str(file_path),
                "operation": operation,
                "original_error": str(original_error) if original_error else None,
            },
        )


class SchedulingInPastError(DeerpSimError):
    """Raised when an event is scheduled before the current clock."""

    def __init__(self, fire_at: float, now: float):
        self.fire_at = fire_at
        self.now = now
        super().__init__(
            f"Cannot schedule event at t={fire_at!r} when clock is t={now!r}",
            error_code="SCHEDULING_IN_PAST",
            severity=ErrorSeverity.HIGH,
            context={"fire_at": fire_at, "now": now},
        )


class NonPositiveSizeError(DeerpSimError):
    """Raised when a packet size is zero or negative."""

    def __init__(self, size_bits: float):
        self.size_bits = size_bits
        super().__init__(
            f"Packet size must be positive, got {size_bits} bits",
            error_code="NON_POSITIVE_SIZE",
            context={"size_bits": size_bits},
        )


class DeadNodeError(DeerpSimError):
    """Raised when a depleted node is asked to send or receive."""

    def __init__(self, node: int, at: float):
        self.node = node
        self.at = at
        super().__init__(
            f"Node {node} has no remaining energy at t={at:.6f}",
            error_code="DEAD_NODE",
            severity=ErrorSeverity.LOW,
            context={"node": node, "at": at},
        )


class NoMatchingRowError(DeerpSimError):
    """Raised when no selection-table row covers a scenario."""

    def __init__(self, mobility: str, node_count: int, speed_max: float):
        self.mobility = mobility
        self.node_count = node_count
        self.speed_max = speed_max
        super().__init__(
            f"No RPSC row covers mobility={mobility} nodes={node_count} "
            f"speed_max={speed_max}",
            error_code="NO_MATCHING_ROW",
            context={
                "mobility": mobility,
                "node_count": node_count,
                "speed_max": speed_max,
            },
        )


class InsufficientNodesError(DeerpSimError):
    """Raised when traffic is requested with fewer than two nodes."""

    def __init__(self, node_count: int):
        self.node_count = node_count
        super().__init__(
            f"Traffic needs at least 2 nodes, got {node_count}",
            error_code="INSUFFICIENT_NODES",
            severity=ErrorSeverity.LOW,
            context={"node_count": node_count},
        )


class UnknownPresetError(DeerpSimError):
    """Raised for an unrecognized preset name."""

    def __init__(self, name: str, known: List[str]):
        self.name = name
        super().__init__(
            f"Unknown preset '{name}'. Known presets: {', '.join(known)}",
            error_code="UNKNOWN_PRESET",
            severity=ErrorSeverity.LOW,
            context={"name": name, "known": known},
        )


class UnknownProtocolError(DeerpSimError):
    """Raised for an unrecognized routing protocol name."""

    def __init__(self, name: str, known: List[str]):
        self.name = name
        super().__init__(
            f"Unknown protocol '{name}'. Supported protocols: {', '.join(known)}",
            error_code="UNKNOWN_PROTOCOL",
            severity=ErrorSeverity.LOW,
            context={"name": name, "known": known},
        )


class EmptyTableError(DeerpSimError):
    """Raised when asked to render a comparison with no rows."""

    def __init__(self, what: str = "comparison table"):
        super().__init__(
            f"Cannot render an empty {what}",
            error_code="EMPTY_TABLE",
            severity=ErrorSeverity.LOW,
        )


def handle_errors(log_error: bool = True) -> Callable:
    """
    Decorator that passes simulator errors through and wraps anything else
    in a ``DeerpSimError`` with error code ``UNEXPECTED_ERROR``.

    Args:
        log_error: Whether to log the error
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except DeerpSimError as e:
                if log_error:
                    logger.debug(f"Error in {func.__name__}: {e.to_dict()}")
                raise
            except Exception as e:
                if log_error:
                    logger.error(
                        f"Unexpected error in {func.__name__}: {e}",
                        exc_info=logger.isEnabledFor(logging.DEBUG),
                    )
                raise DeerpSimError(
                    f"Unexpected error in {func.__name__}: {e}",
                    error_code="UNEXPECTED_ERROR",
                    severity=ErrorSeverity.HIGH,
                    context={"function": func.__name__, "original_error": str(e)},
                ) from e

        return wrapper

    return decorator
