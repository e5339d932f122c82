"""File system helpers.

Directory creation, config-relative path resolution and the
deterministic JSON writer used for graph and solution documents.
"""

import json
import logging
from pathlib import Path
from typing import Any, Union

logger = logging.getLogger(__name__)


def ensure_directory(path: Union[str, Path]) -> Path:
    """Create ``path`` (with parents) if it is missing.

    Args:
        path: Output directory.

    Returns:
        The directory as a Path.

    Example:
        >>> out = ensure_directory("output/scenarios")
        >>> out.is_dir()
        True
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def resolve_relative(path: Union[str, Path], base_dir: Path) -> Path:
    """Resolve ``path`` against ``base_dir`` unless it is already absolute.

    Args:
        path: File path from a configuration document.
        base_dir: Directory the document lives in.

    Returns:
        Resolved absolute path.
    """
    path = Path(path)
    if not path.is_absolute():
        path = Path(base_dir) / path
    return path.resolve()


def write_json(data: Any, path: Union[str, Path]) -> Path:
    """Write ``data`` as indented, key-sorted JSON.

    Key order and indentation are fixed so identical inputs give
    byte-identical files.

    Args:
        data: JSON-serializable object.
        path: Destination file. Parent directories are created.

    Returns:
        Path of the written file.
    """
    path = Path(path)
    ensure_directory(path.parent)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path
