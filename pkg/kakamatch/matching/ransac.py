"""RANSAC mismatch removal over a preliminary match set."""

from dataclasses import dataclass

import numpy as np

from kakamatch.logger import get_logger
from kakamatch.matching.homography import Homography, dlt_batch, fit_homography, project_points
from kakamatch.matching.matchers import MatchSet
from kakamatch.utils.exceptions import ArgumentError, FitError, InsufficientMatchesError, NoConsensusError

logger = get_logger(__name__)

SAMPLE_SIZE = 4


@dataclass(frozen=True, eq=False)
class RansacResult:
    """Consensus matches, the homography explaining them and their reprojection errors."""
    inliers: MatchSet
    homography: Homography
    errors: np.ndarray
    n_input: int
    best_iteration: int

    def __iter__(self):
        # Unpacks as (inliers, homography)
        return iter((self.inliers, self.homography))


def reprojection_errors(matrix: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Forward transfer error |H(src) - dst| per correspondence; NaN maps to inf."""
    mapped = project_points(matrix, src)
    errors = np.linalg.norm(mapped - dst, axis=-1)
    return np.where(np.isfinite(errors), errors, np.inf)


def draw_samples(n_matches: int, iters: int, seed: int) -> np.ndarray:
    """
    (iters, 4) distinct match indices drawn up front from one seeded stream.

    Row i holds the four smallest of n uniform keys, a uniform 4-subset.
    """
    keys = np.random.default_rng(seed).random((iters, n_matches))
    return np.argpartition(keys, SAMPLE_SIZE - 1, axis=1)[:, :SAMPLE_SIZE]


def ransac_filter(
    ms: MatchSet,
    points_a: np.ndarray,
    points_b: np.ndarray,
    iters: int = 1000,
    inlier_px: float = 3.0,
    seed: int = 0,
) -> RansacResult:
    """
    Keep the largest set of matches consistent with one homography.

    Every iteration fits a homography to four distinct matches and counts
    the matches it reprojects within ``inlier_px``. The largest consensus
    wins, the earliest iteration breaking ties. The homography is then
    refitted on that consensus and the members it reprojects within
    ``inlier_px`` are returned; if fewer than four remain, the winning
    sample's homography and consensus are returned instead.

    Args:
        ms: Preliminary matches
        points_a: (N, 2) keypoint locations of image A (query side)
        points_b: (M, 2) keypoint locations of image B (train side)
        iters: Number of samples
        inlier_px: Reprojection threshold in pixels
        seed: Sampling seed

    Raises:
        InsufficientMatchesError: If fewer than four matches are given
        NoConsensusError: If no sample gathers four or more inliers
    """
    if iters < 1:
        raise ArgumentError(f"iters must be at least 1, got {iters}")
    if len(ms) < SAMPLE_SIZE:
        raise InsufficientMatchesError(f"RANSAC needs at least {SAMPLE_SIZE} matches, got {len(ms)}")

    src = np.asarray(points_a, dtype=np.float64).reshape(-1, 2)[ms.query_idx]
    dst = np.asarray(points_b, dtype=np.float64).reshape(-1, 2)[ms.train_idx]

    samples = draw_samples(len(ms), iters, seed)
    matrices, valid = dlt_batch(src[samples], dst[samples])
    errors = reprojection_errors(matrices, src, dst)
    counts = np.where(valid, np.sum(errors < inlier_px, axis=1), -1)

    best = int(np.argmax(counts))
    if counts[best] < SAMPLE_SIZE:
        raise NoConsensusError(
            f"Best consensus has {max(int(counts[best]), 0)} of {len(ms)} matches (need {SAMPLE_SIZE})"
        )

    consensus = errors[best] < inlier_px
    homography = Homography(matrices[best])
    final_errors = errors[best]
    try:
        refit = fit_homography(src[consensus], dst[consensus])
        refit_errors = reprojection_errors(refit.matrix, src, dst)
        kept = consensus & (refit_errors < inlier_px)
        if kept.sum() >= SAMPLE_SIZE:
            homography, consensus, final_errors = refit, kept, refit_errors
    except FitError as e:
        logger.debug(f"Consensus refit failed, keeping sample fit: {e}")

    logger.debug(
        f"RANSAC kept {int(consensus.sum())}/{len(ms)} matches (best sample at iteration {best})"
    )
    return RansacResult(
        inliers=ms.subset(consensus),
        homography=homography,
        errors=final_errors[consensus],
        n_input=len(ms),
        best_iteration=best,
    )
