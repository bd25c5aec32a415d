"""
Utility functions for deerpsim.

Logging, the error hierarchy, run counters, file helpers and scenario
validation.
"""

from .error_handling import DeerpSimError, ValidationError, handle_errors
from .file_utils import ensure_directory, load_mapping, write_json
from .logging_config import get_logger, setup_logging
from .metrics import MetricsCollector

__all__ = [
    "DeerpSimError",
    "ValidationError",
    "handle_errors",
    "ensure_directory",
    "load_mapping",
    "write_json",
    "get_logger",
    "setup_logging",
    "MetricsCollector",
]
