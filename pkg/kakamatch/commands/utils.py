"""Utility functions for kakamatch commands."""

import json
import sys
from pathlib import Path
from typing import Any, Optional

from rich.console import Console

from kakamatch.utils.exceptions import DatasetError

# User-facing messages go to stderr; stdout carries JSON reports
console = Console(stderr=True)


def get_display_path(path: Path) -> str:
    """
    Convert a path to a display-friendly format.

    Returns the absolute path.
    """
    return str(Path(path).absolute())


def require_dir(path: Path, what: str = "Directory") -> Path:
    """
    Check that ``path`` is an existing directory.

    Raises:
        FileNotFoundError: If it is missing or not a directory
    """
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"{what} not found: {get_display_path(path)}")
    return path


def require_file(path: Path, what: str = "File") -> Path:
    """
    Check that ``path`` is an existing file.

    Raises:
        FileNotFoundError: If it is missing
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"{what} not found: {get_display_path(path)}")
    return path


def dump_json(payload: Any) -> str:
    """Stable UTF-8 JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit_json(payload: Any, out_path: Optional[Path] = None) -> None:
    """Write ``payload`` to ``out_path``, or to stdout when no path is given."""
    text = dump_json(payload)
    if out_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8")
    console.print(f"[green]✓[/green] Wrote {get_display_path(out_path)}")


def resolve_labels(features_dir: Path, labels: Optional[Path]) -> Optional[Path]:
    """
    Labels CSV to use: the given path, else ``labels.csv`` beside the feature directory.

    Raises:
        DatasetError: If an explicit path does not exist
    """
    if labels is not None:
        if not Path(labels).is_file():
            raise DatasetError(f"Labels file not found: {get_display_path(labels)}")
        return Path(labels)
    sibling = Path(features_dir).parent / "labels.csv"
    return sibling if sibling.is_file() else None
