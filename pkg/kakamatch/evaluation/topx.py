"""Top-X identification accuracy over the labelled part of a corpus."""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from kakamatch.config import PipelineConfig
from kakamatch.features.extractor import FeatureSet
from kakamatch.logger import get_logger
from kakamatch.similarity.dataset import DatasetIndex
from kakamatch.similarity.ranking import RankedResult, rank_all, top_x
from kakamatch.utils.exceptions import ArgumentError

logger = get_logger(__name__)

TABLE_COLUMNS = ["Label", "Correct", "Incorrect", "Total", "Accuracy"]
OVERALL = "Overall"


@dataclass(frozen=True)
class LabelRow:
    """Accuracy counts for one label."""
    label: str
    correct: int
    incorrect: int

    @property
    def total(self) -> int:
        return self.correct + self.incorrect

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass
class LabelTable:
    """Per-label rows plus the overall row, for one value of X."""
    x: int
    rows: List[LabelRow] = field(default_factory=list)

    @property
    def overall(self) -> LabelRow:
        return LabelRow(
            OVERALL,
            sum(r.correct for r in self.rows),
            sum(r.incorrect for r in self.rows),
        )

    def to_frame(self) -> pd.DataFrame:
        records = [
            [r.label, r.correct, r.incorrect, r.total, r.accuracy]
            for r in self.rows + [self.overall]
        ]
        return pd.DataFrame(records, columns=TABLE_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        def row(r: LabelRow) -> Dict[str, Any]:
            return {
                "label": r.label,
                "correct": r.correct,
                "incorrect": r.incorrect,
                "total": r.total,
                "accuracy": r.accuracy,
            }
        return {"x": self.x, "rows": [row(r) for r in self.rows], "overall": row(self.overall)}


def render_table(table: LabelTable) -> str:
    """Aligned plain-text table, accuracy to four decimals."""
    frame = table.to_frame()
    frame["Accuracy"] = frame["Accuracy"].map(lambda v: f"{v:.4f}")
    return f"Top-{table.x}\n" + frame.to_string(index=False)


def tabulate(
    index: DatasetIndex,
    rankings: Dict[str, RankedResult],
    x: int,
) -> LabelTable:
    """
    Count, per label, queries whose top ``x`` contains an image of that label.

    Unlabelled gallery hits never count as correct; a query with an empty
    ranking counts as incorrect.
    """
    correct: Dict[str, int] = defaultdict(int)
    incorrect: Dict[str, int] = defaultdict(int)
    for entry in index.labelled():
        hits = top_x(rankings[entry.image_id], x) if entry.image_id in rankings else []
        if any(index.get(hit).label == entry.label for hit in hits):
            correct[entry.label] += 1
        else:
            incorrect[entry.label] += 1
    rows = [LabelRow(label, correct[label], incorrect[label]) for label in index.labels]
    return LabelTable(x=x, rows=rows)


def evaluate_many(
    index: DatasetIndex,
    xs: Sequence[int],
    cfg: Optional[PipelineConfig] = None,
    features: Optional[Dict[str, FeatureSet]] = None,
    threads: Optional[int] = None,
) -> Dict[int, LabelTable]:
    """
    Top-X tables for several X, ranking each labelled query once.

    Raises:
        ArgumentError: If the index has no labelled entries or some x < 1
    """
    cfg = cfg or PipelineConfig()
    labelled = index.labelled()
    if not labelled:
        raise ArgumentError("Evaluation needs at least one labelled image")
    for x in xs:
        if x < 1:
            raise ArgumentError(f"x must be at least 1, got {x}")

    queries = [e.image_id for e in labelled]
    logger.info(f"Evaluating {len(queries)} labelled queries against {len(index)} images")
    rankings = rank_all(index, cfg, queries=queries, features=features, threads=threads)
    tables = {x: tabulate(index, rankings, x) for x in xs}
    for x, table in tables.items():
        logger.info(f"Top-{x} accuracy: {table.overall.accuracy:.4f}")
    return tables


def evaluate_topx(
    index: DatasetIndex,
    x: int,
    cfg: Optional[PipelineConfig] = None,
    features: Optional[Dict[str, FeatureSet]] = None,
    threads: Optional[int] = None,
) -> LabelTable:
    """
    Top-X accuracy table.

    A labelled query is correct when at least one of its top ``x`` gallery
    images carries the same label.

    Raises:
        ArgumentError: If the index has no labelled entries or x < 1
    """
    return evaluate_many(index, [x], cfg, features=features, threads=threads)[x]
