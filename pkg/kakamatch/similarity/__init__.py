"""Similarity scoring, pairwise matching and gallery ranking."""

from kakamatch.similarity.scoring import similarity_score
from kakamatch.similarity.dataset import DatasetIndex, IndexEntry, build_index, read_labels, write_labels
from kakamatch.similarity.pairing import MatcherComparison, PairResult, compare_matchers, match_pair, pair_report
from kakamatch.similarity.ranking import RankedEntry, RankedResult, rank_all, rank_matches, top_x

__all__ = [
    'similarity_score',
    'DatasetIndex',
    'IndexEntry',
    'build_index',
    'read_labels',
    'write_labels',
    'MatcherComparison',
    'PairResult',
    'compare_matchers',
    'match_pair',
    'pair_report',
    'RankedEntry',
    'RankedResult',
    'rank_all',
    'rank_matches',
    'top_x',
]
