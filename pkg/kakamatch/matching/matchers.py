"""Brute-force preliminary matching: NN, mutual NN and the distance-ratio test."""

from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Optional

import numpy as np
from scipy.spatial.distance import cdist

from kakamatch.utils.exceptions import ArgumentError

STRATEGIES = ("nn", "mnn", "nndr")


class FeatureMatch(NamedTuple):
    """Correspondence between feature ``query_idx`` of A and ``train_idx`` of B."""
    query_idx: int
    train_idx: int
    distance: float


@dataclass(frozen=True, eq=False)
class MatchSet:
    """Matches between two feature sets, stored column-wise."""
    query_idx: np.ndarray
    train_idx: np.ndarray
    distance: np.ndarray
    strategy: str
    ratio: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "query_idx", np.asarray(self.query_idx, dtype=np.int64).reshape(-1))
        object.__setattr__(self, "train_idx", np.asarray(self.train_idx, dtype=np.int64).reshape(-1))
        object.__setattr__(self, "distance", np.asarray(self.distance, dtype=np.float64).reshape(-1))
        if not (len(self.query_idx) == len(self.train_idx) == len(self.distance)):
            raise ArgumentError("MatchSet columns differ in length")

    @classmethod
    def empty(cls, strategy: str, ratio: Optional[float] = None) -> "MatchSet":
        return cls(np.zeros(0), np.zeros(0), np.zeros(0), strategy, ratio)

    def __len__(self) -> int:
        return len(self.query_idx)

    def __iter__(self) -> Iterator[FeatureMatch]:
        for q, t, d in zip(self.query_idx, self.train_idx, self.distance):
            yield FeatureMatch(int(q), int(t), float(d))

    @property
    def matches(self) -> List[FeatureMatch]:
        return list(self)

    def subset(self, keep: np.ndarray) -> "MatchSet":
        """Matches selected by a boolean mask or index array, order preserved."""
        return MatchSet(self.query_idx[keep], self.train_idx[keep], self.distance[keep], self.strategy, self.ratio)


def _as_descriptors(values, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim != 2:
        raise ArgumentError(f"{name} must be an (n, d) array, got shape {array.shape}")
    return array


def _distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = _as_descriptors(a, "A")
    b = _as_descriptors(b, "B")
    if a.shape[1] != b.shape[1]:
        raise ArgumentError(f"Descriptor lengths differ: {a.shape[1]} vs {b.shape[1]}")
    return cdist(a, b, metric="euclidean")


def match_nn(a: np.ndarray, b: np.ndarray) -> MatchSet:
    """
    Match every descriptor of A to its nearest descriptor in B.

    Ties go to the lowest train index.

    Raises:
        ArgumentError: If B is empty
    """
    b = _as_descriptors(b, "B")
    if len(b) == 0:
        raise ArgumentError("Nearest-neighbour matching needs at least one train descriptor")
    if len(a) == 0:
        return MatchSet.empty("nn")
    dist = _distances(a, b)
    train = np.argmin(dist, axis=1)
    query = np.arange(len(train))
    return MatchSet(query, train, dist[query, train], "nn")


def match_mnn(a: np.ndarray, b: np.ndarray) -> MatchSet:
    """
    Keep only mutual nearest neighbours.

    The result is a subset of :func:`match_nn` and uses each query and each
    train index at most once.

    Raises:
        ArgumentError: If B is empty
    """
    b = _as_descriptors(b, "B")
    if len(b) == 0:
        raise ArgumentError("Mutual nearest-neighbour matching needs at least one train descriptor")
    if len(a) == 0:
        return MatchSet.empty("mnn")
    dist = _distances(a, b)
    forward = np.argmin(dist, axis=1)
    backward = np.argmin(dist, axis=0)
    query = np.arange(len(forward))
    mutual = backward[forward] == query
    return MatchSet(query[mutual], forward[mutual], dist[query[mutual], forward[mutual]], "mnn")


def match_nndr(a: np.ndarray, b: np.ndarray, ratio: float = 0.8) -> MatchSet:
    """
    Nearest-neighbour distance-ratio test.

    A match survives when d1 < ratio * d2, d1 <= d2 being the two smallest
    distances from the query to B. Duplicate best distances therefore never
    survive.

    Raises:
        ArgumentError: If B has fewer than two descriptors or ratio <= 0
    """
    b = _as_descriptors(b, "B")
    if len(b) < 2:
        raise ArgumentError("Ratio-test matching needs at least two train descriptors")
    if not ratio > 0:
        raise ArgumentError(f"Ratio must be positive, got {ratio}")
    if len(a) == 0:
        return MatchSet.empty("nndr", ratio)
    dist = _distances(a, b)
    train = np.argmin(dist, axis=1)
    query = np.arange(len(train))
    two_smallest = np.partition(dist, 1, axis=1)[:, :2]
    d1, d2 = two_smallest[:, 0], two_smallest[:, 1]
    keep = d1 < ratio * d2
    return MatchSet(query[keep], train[keep], d1[keep], "nndr", ratio)


def match_descriptors(a: np.ndarray, b: np.ndarray, strategy: str = "mnn", ratio: float = 0.8) -> MatchSet:
    """Dispatch to the preliminary matcher named by ``strategy``."""
    if strategy == "nn":
        return match_nn(a, b)
    if strategy == "mnn":
        return match_mnn(a, b)
    if strategy == "nndr":
        return match_nndr(a, b, ratio)
    raise ArgumentError(f"Unknown matching strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
