"""Similarity score over RANSAC-surviving match distances."""

import math
from typing import Iterable

import numpy as np

from kakamatch.utils.exceptions import ArgumentError, UndefinedScoreError


def similarity_score(distances: Iterable[float]) -> float:
    """
    S(D) = |D| + 1 / (1 + mean(D)).

    The distance term lies in (0, 1], so more matches always outrank fewer
    and, at equal counts, a lower mean distance ranks higher. Matching an
    image with itself gives the maximum |D| + 1.

    Raises:
        UndefinedScoreError: If D is empty
        ArgumentError: If any distance is negative or not finite
    """
    values = np.asarray(list(distances), dtype=np.float64).ravel()
    if values.size == 0:
        raise UndefinedScoreError("Similarity is undefined for an empty match set")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ArgumentError("Match distances must be finite and non-negative")
    count = values.size
    mean = math.fsum(values) / count
    return count + 1.0 / (1.0 + mean)
