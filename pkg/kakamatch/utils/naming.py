"""Corpus file-naming conventions: ``<clipid>_<frameidx>.<ext>``."""

from pathlib import Path
from typing import List

IMAGE_SUFFIXES = (".pgm", ".ppm")


def clip_id(image_id: str) -> str:
    """Clip of an image id: everything before the last underscore."""
    head, sep, _ = image_id.rpartition("_")
    return head if sep else image_id


def list_images(directory: Path) -> List[Path]:
    """PGM/PPM files directly inside ``directory``, sorted by name."""
    return sorted(
        p for p in Path(directory).iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES and not p.name.startswith(".")
    )
