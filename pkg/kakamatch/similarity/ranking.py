"""
Gallery ranking with same-clip exclusion.

Pair scoring fans out over a process pool. Workers receive the loaded
feature sets once through the pool initializer; results are merged with a
stable sort so rankings never depend on scheduling.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import pandas as pd

from kakamatch.config import PipelineConfig
from kakamatch.features.extractor import FeatureSet
from kakamatch.logger import get_logger
from kakamatch.similarity.dataset import DatasetIndex
from kakamatch.similarity.pairing import PairResult, match_pair
from kakamatch.utils.exceptions import ArgumentError

logger = get_logger(__name__)

RESULT_COLUMNS = ["image", "clip", "score", "n_matches", "mean_distance"]


@dataclass(frozen=True)
class RankedEntry:
    """One gallery image in a ranking."""
    image: str
    clip: str
    score: float
    n_matches: int
    mean_distance: float


@dataclass
class RankedResult:
    """Gallery images ordered best first for one query."""
    query: str
    ranked: List[RankedEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.ranked)

    @property
    def ids(self) -> List[str]:
        return [e.image for e in self.ranked]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "query": self.query,
            "results": [
                {
                    "image": e.image,
                    "clip": e.clip,
                    "score": e.score,
                    "n_matches": e.n_matches,
                    "mean_distance": e.mean_distance,
                }
                for e in self.ranked
            ],
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dict()["results"], columns=RESULT_COLUMNS)


def _sort_key(criterion: str):
    if criterion == "similarity":
        return lambda e: (-e.score, e.image)
    if criterion == "matches":
        return lambda e: (-e.n_matches, e.mean_distance, e.image)
    if criterion == "mean_distance":
        return lambda e: (e.mean_distance, e.image)
    raise ArgumentError(f"Unknown ranking criterion {criterion!r}")


def order_results(query: str, pairs: Iterable[PairResult], index: DatasetIndex, criterion: str = "similarity") -> RankedResult:
    """Sort scored pairs into a ranking by ``criterion``, ties by image id."""
    entries = [
        RankedEntry(
            image=p.image_b,
            clip=index.get(p.image_b).clip_id,
            score=p.score,
            n_matches=p.n_matches,
            mean_distance=p.mean_distance,
        )
        for p in pairs
    ]
    entries.sort(key=_sort_key(criterion))
    return RankedResult(query=query, ranked=entries)


def gallery_for(query: str, index: DatasetIndex) -> List[str]:
    """Ids eligible for comparison with ``query``: every other clip."""
    query_clip = index.get(query).clip_id
    return [e.image_id for e in index if e.clip_id != query_clip]


# Per-process state installed by the pool initializer
_worker_features: Dict[str, FeatureSet] = {}
_worker_cfg: Optional[PipelineConfig] = None


def _init_worker(features: Dict[str, FeatureSet], cfg: PipelineConfig) -> None:
    global _worker_features, _worker_cfg
    _worker_features = features
    _worker_cfg = cfg


def score_gallery(query: str, gallery: List[str], features: Dict[str, FeatureSet], cfg: PipelineConfig) -> List[PairResult]:
    """Score ``query`` against each gallery id, dropping no-match pairs."""
    results = []
    for image_id in gallery:
        result = match_pair(features[query], features[image_id], cfg)
        if result is not None:
            results.append(result)
    return results


def _score_in_worker(query: str, gallery: List[str]) -> List[PairResult]:
    return score_gallery(query, gallery, _worker_features, _worker_cfg)


def _chunks(items: List[str], n_chunks: int) -> List[List[str]]:
    size = max(1, -(-len(items) // n_chunks))
    return [items[i:i + size] for i in range(0, len(items), size)]


def rank_all(
    index: DatasetIndex,
    cfg: PipelineConfig,
    queries: Optional[List[str]] = None,
    features: Optional[Dict[str, FeatureSet]] = None,
    threads: Optional[int] = None,
) -> Dict[str, RankedResult]:
    """
    Rank the gallery for several queries, loading every feature file once.

    Args:
        index: Dataset index
        cfg: Pipeline configuration
        queries: Query ids (all entries by default)
        features: Preloaded features keyed by image id
        threads: Worker processes (defaults to cfg.threads; 1 runs inline)

    Raises:
        DatasetError: If a query is unknown or a feature file is missing
    """
    queries = list(index.ids if queries is None else queries)
    galleries = {q: gallery_for(q, index) for q in queries}
    if features is None:
        features = index.load_features()
    threads = threads or cfg.threads

    pairs: Dict[str, List[PairResult]] = {q: [] for q in queries}
    if threads <= 1:
        for query in queries:
            pairs[query] = score_gallery(query, galleries[query], features, cfg)
    else:
        # One task per query when there are enough of them, gallery chunks otherwise
        tasks = []
        for query in queries:
            n_chunks = max(1, threads // max(len(queries), 1))
            for chunk in _chunks(galleries[query], n_chunks):
                tasks.append((query, chunk))
        logger.info(f"Scoring {sum(len(g) for g in galleries.values())} pairs with {threads} workers...")
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(features, cfg)) as executor:
            futures = {executor.submit(_score_in_worker, query, chunk): query for query, chunk in tasks}
            for future in as_completed(futures):
                pairs[futures[future]].extend(future.result())

    return {q: order_results(q, pairs[q], index, cfg.rank.criterion) for q in queries}


def rank_matches(
    query: str,
    index: DatasetIndex,
    cfg: Optional[PipelineConfig] = None,
    features: Optional[Dict[str, FeatureSet]] = None,
    threads: Optional[int] = None,
) -> RankedResult:
    """
    Rank every gallery image from another clip against ``query``.

    Pairs without a RANSAC consensus are left out.

    Raises:
        DatasetError: If the query id is unknown or a feature file is missing
    """
    cfg = cfg or PipelineConfig()
    index.get(query)
    if features is None:
        features = index.load_features([query] + gallery_for(query, index))
    return rank_all(index, cfg, queries=[query], features=features, threads=threads)[query]


def top_x(ranked: RankedResult, x: int) -> List[str]:
    """
    First min(x, len(ranked)) image ids.

    Raises:
        ArgumentError: If x < 1
    """
    if x < 1:
        raise ArgumentError(f"x must be at least 1, got {x}")
    return ranked.ids[:x]
