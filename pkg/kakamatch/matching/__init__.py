"""Preliminary descriptor matching and RANSAC homography filtering."""

from kakamatch.matching.matchers import (
    STRATEGIES,
    FeatureMatch,
    MatchSet,
    match_descriptors,
    match_mnn,
    match_nn,
    match_nndr,
)
from kakamatch.matching.homography import Homography, fit_homography
from kakamatch.matching.ransac import RansacResult, ransac_filter

__all__ = [
    'STRATEGIES',
    'FeatureMatch',
    'MatchSet',
    'match_descriptors',
    'match_mnn',
    'match_nn',
    'match_nndr',
    'Homography',
    'fit_homography',
    'RansacResult',
    'ransac_filter',
]
