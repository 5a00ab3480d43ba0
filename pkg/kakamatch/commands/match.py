"""Pair matching and matcher comparison commands."""

from pathlib import Path
from typing import Any, Dict, List, Optional

from rich.table import Table

from kakamatch.config import PipelineConfig
from kakamatch.features.featureio import read_features
from kakamatch.similarity.pairing import MatcherComparison, compare_matchers, match_pair, pair_report

from .utils import console, emit_json, require_file


def cmd_match(
    feat_a: Path,
    feat_b: Path,
    cfg: PipelineConfig,
    out_path: Optional[Path] = None,
) -> Dict[str, Any]:
    """
    Match two feature files and emit the pair report as JSON.

    Args:
        feat_a: Query feature file
        feat_b: Gallery feature file
        cfg: Pipeline configuration
        out_path: Report file (stdout when omitted)

    Returns:
        The report dictionary
    """
    features_a = read_features(require_file(feat_a, "Feature file"))
    features_b = read_features(require_file(feat_b, "Feature file"))
    result = match_pair(features_a, features_b, cfg)
    report = pair_report(features_a, features_b, cfg, result)

    if result is None:
        console.print(f"[yellow]No match between {features_a.image_id} and {features_b.image_id}[/yellow]")
    else:
        console.print(
            f"[green]✓[/green] {features_a.image_id} ↔ {features_b.image_id}: "
            f"{result.n_matches} matches, score {result.score:.4f}"
        )
    emit_json(report, out_path)
    return report


def cmd_compare_matchers(
    feat_a: Path,
    feat_b: Path,
    cfg: PipelineConfig,
    out_path: Optional[Path] = None,
) -> List[MatcherComparison]:
    """Run NN, MNN and NNDR on one pair and tabulate counts before and after RANSAC."""
    features_a = read_features(require_file(feat_a, "Feature file"))
    features_b = read_features(require_file(feat_b, "Feature file"))
    rows = compare_matchers(features_a, features_b, cfg)

    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Strategy")
    table.add_column("Preliminary", justify="right")
    table.add_column("Inliers", justify="right")
    table.add_column("Score", justify="right")
    for row in rows:
        score = f"{row.score:.4f}" if row.score is not None else "no match"
        table.add_row(row.strategy, str(row.n_preliminary), str(row.n_inliers), score)
    console.print(table)

    emit_json(
        {
            "image_a": features_a.image_id,
            "image_b": features_b.image_id,
            "strategies": [
                {
                    "strategy": row.strategy,
                    "n_preliminary": row.n_preliminary,
                    "n_inliers": row.n_inliers,
                    "score": row.score,
                }
                for row in rows
            ],
        },
        out_path,
    )
    return rows
