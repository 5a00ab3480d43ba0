"""Frame selection command."""

from pathlib import Path
from typing import List

from kakamatch.imaging.pnm import read_pnm
from kakamatch.logger import get_logger
from kakamatch.segmentation.frames import PROBE_THRESHOLD, select_frame
from kakamatch.utils.naming import list_images

from .utils import console, get_display_path, require_dir

logger = get_logger(__name__)


def cmd_select_frames(in_dir: Path, out_manifest: Path, threshold: int = PROBE_THRESHOLD) -> List[str]:
    """
    Keep frames whose probe pixel is brighter than ``threshold``.

    Writes the chosen filenames, one per line, to ``out_manifest``.

    Args:
        in_dir: Directory of decoded PGM/PPM frames
        out_manifest: Manifest file to write
        threshold: Probe intensity threshold (8-bit)

    Returns:
        Selected filenames in name order

    Raises:
        FileNotFoundError: If ``in_dir`` does not exist
    """
    in_dir = require_dir(in_dir, "Frame directory")
    console.print(f"\n[bold blue]Selecting frames[/bold blue] in {get_display_path(in_dir)}")

    frames = list_images(in_dir)
    selected = []
    for path in frames:
        if select_frame(read_pnm(path), threshold):
            selected.append(path.name)
        else:
            logger.debug(f"Rejected {path.name}: probe not above {threshold}")

    out_manifest = Path(out_manifest)
    out_manifest.parent.mkdir(parents=True, exist_ok=True)
    out_manifest.write_text("".join(f"{name}\n" for name in selected), encoding="utf-8")

    console.print(f"[green]✓[/green] {len(selected)} of {len(frames)} frames selected")
    console.print(f"  Manifest: {get_display_path(out_manifest)}")
    return selected
