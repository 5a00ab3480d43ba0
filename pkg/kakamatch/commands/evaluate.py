"""Top-X evaluation command."""

from pathlib import Path
from typing import Dict, Optional, Sequence

from rich.table import Table

from kakamatch.config import PipelineConfig
from kakamatch.evaluation.topx import LabelTable, evaluate_many, render_table
from kakamatch.similarity.dataset import build_index
from kakamatch.utils.exceptions import DatasetError

from .utils import console, emit_json, get_display_path, require_dir, resolve_labels

DEFAULT_XS = (1, 2, 3)


def _rich_table(table: LabelTable) -> Table:
    view = Table(title=f"Top-{table.x}", show_header=True, header_style="bold magenta")
    for column in ("Label", "Correct", "Incorrect", "Total", "Accuracy"):
        view.add_column(column, justify="left" if column == "Label" else "right")
    for row in table.rows + [table.overall]:
        view.add_row(row.label, str(row.correct), str(row.incorrect), str(row.total), f"{row.accuracy:.4f}")
    return view


def cmd_evaluate(
    features_dir: Path,
    cfg: PipelineConfig,
    labels: Optional[Path] = None,
    xs: Sequence[int] = DEFAULT_XS,
    out_path: Optional[Path] = None,
    text_path: Optional[Path] = None,
    threads: Optional[int] = None,
) -> Dict[int, LabelTable]:
    """
    Top-X accuracy tables over the labelled images in ``features_dir``.

    Args:
        features_dir: Directory of ``*.sift`` files
        cfg: Pipeline configuration
        labels: ``filename,label`` CSV (defaults to ``labels.csv`` beside the feature directory)
        xs: Values of X to tabulate
        out_path: Evaluation JSON (stdout when omitted)
        text_path: Optional plain-text copy of the tables
        threads: Worker processes

    Raises:
        DatasetError: If no labels file is available
    """
    features_dir = require_dir(features_dir, "Feature directory")
    labels = resolve_labels(features_dir, labels)
    if labels is None:
        raise DatasetError("Evaluation needs a labels CSV (--labels)")

    index = build_index(features_dir, labels)
    xs = sorted(set(xs))
    tables = evaluate_many(index, xs, cfg, threads=threads)

    for x in xs:
        console.print(_rich_table(tables[x]))
    if text_path is not None:
        text_path = Path(text_path)
        text_path.parent.mkdir(parents=True, exist_ok=True)
        text_path.write_text("\n\n".join(render_table(tables[x]) for x in xs) + "\n", encoding="utf-8")
        console.print(f"  Tables: {get_display_path(text_path)}")

    emit_json(
        {
            "seed": cfg.seed,
            "strategy": cfg.match.strategy,
            "criterion": cfg.rank.criterion,
            "tables": [tables[x].to_dict() for x in xs],
        },
        out_path,
    )
    return tables
