"""Match overlay command."""

import json
from pathlib import Path
from typing import Any, Dict, List

from kakamatch.imaging.draw import MatchedPair, render_matches
from kakamatch.imaging.image import RgbImage
from kakamatch.imaging.pnm import read_pnm, write_pnm
from kakamatch.utils.exceptions import DatasetError

from .utils import console, get_display_path, require_file


def report_pairs(report: Dict[str, Any]) -> List[MatchedPair]:
    """Matched keypoint pairs ``((x, y, sigma), (x, y, sigma))`` of a pair report."""
    try:
        return [
            (
                (m["query_xy"][0], m["query_xy"][1], m["query_sigma"]),
                (m["train_xy"][0], m["train_xy"][1], m["train_sigma"]),
            )
            for m in report.get("matches", [])
        ]
    except (KeyError, IndexError, TypeError) as e:
        raise DatasetError(f"Malformed match report: {e}")


def cmd_visualize(image_a: Path, image_b: Path, report_path: Path, out_image: Path) -> RgbImage:
    """
    Draw a pair report's matches over the two images, side by side, as a PPM.

    Raises:
        DatasetError: If the report cannot be parsed
    """
    first = read_pnm(require_file(image_a, "Image"))
    second = read_pnm(require_file(image_b, "Image"))
    try:
        report = json.loads(require_file(report_path, "Report").read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DatasetError(f"Report {report_path} is not valid JSON: {e}")

    pairs = report_pairs(report)
    overlay = render_matches(first, second, pairs)
    write_pnm(Path(out_image), overlay)
    console.print(f"[green]✓[/green] Drew {len(pairs)} matches to {get_display_path(Path(out_image))}")
    return overlay
