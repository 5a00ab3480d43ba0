"""Gallery ranking command."""

from pathlib import Path
from typing import Optional

from kakamatch.config import PipelineConfig
from kakamatch.similarity.dataset import build_index
from kakamatch.similarity.ranking import RankedResult, rank_matches

from .utils import console, emit_json, get_display_path, require_dir


def cmd_rank(
    query: str,
    features_dir: Path,
    cfg: PipelineConfig,
    out_path: Optional[Path] = None,
    csv_path: Optional[Path] = None,
    top: Optional[int] = None,
    threads: Optional[int] = None,
) -> RankedResult:
    """
    Rank every other-clip image in ``features_dir`` against ``query``.

    Args:
        query: Query image id (feature file stem)
        features_dir: Directory of ``*.sift`` files
        cfg: Pipeline configuration
        out_path: Ranking JSON (stdout when omitted)
        csv_path: Optional CSV copy of the ranking
        top: Keep only the first ``top`` entries in the output
        threads: Worker processes

    Raises:
        DatasetError: If the query is not in the index
    """
    index = build_index(require_dir(features_dir, "Feature directory"))
    ranked = rank_matches(query, index, cfg, threads=threads)
    if top is not None:
        ranked = RankedResult(query=ranked.query, ranked=ranked.ranked[:top])

    console.print(f"[green]✓[/green] Ranked {len(ranked)} gallery images for {query}")
    if csv_path is not None:
        csv_path = Path(csv_path)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        ranked.to_frame().to_csv(csv_path, index=False, lineterminator="\n")
        console.print(f"  CSV: {get_display_path(csv_path)}")
    emit_json(ranked.to_dict(), out_path)
    return ranked
