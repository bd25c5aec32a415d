"""
File handling utilities.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from .error_handling import ConfigurationError, FileProcessingError

PathLike = Union[str, Path]


def ensure_directory(path: PathLike) -> Path:
    """Create directory if it doesn't exist."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def default_output_dir(fallback: str = "deerpsim-out") -> Path:
    """Output directory from ``DEERPSIM_OUT`` or the given fallback."""
    return Path(os.getenv("DEERPSIM_OUT", fallback))


def load_mapping(file_path: PathLike) -> Dict[str, Any]:
    """Load a YAML or JSON mapping from disk."""
    path = Path(file_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise FileProcessingError(str(path), "read", e) from e

    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(str(path), message=f"Cannot parse {path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(
            str(path), message=f"{path} must contain a mapping at the top level"
        )
    return data


def write_json(file_path: PathLike, data: Any) -> Path:
    """Write ``data`` as stable, sorted, indented JSON."""
    path = Path(file_path)
    ensure_directory(path.parent)
    try:
        text = json.dumps(data, indent=2, sort_keys=True, default=str)
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise FileProcessingError(str(path), "write", e) from e
    return path
