"""Pairwise image matching: preliminary matches, RANSAC, score."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from kakamatch.config import PipelineConfig
from kakamatch.features.extractor import FeatureSet
from kakamatch.logger import get_logger
from kakamatch.matching.homography import Homography
from kakamatch.matching.matchers import STRATEGIES, MatchSet, match_descriptors
from kakamatch.matching.ransac import ransac_filter
from kakamatch.similarity.scoring import similarity_score
from kakamatch.utils.exceptions import MatchingError
from kakamatch.utils.seeding import derive_seed

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class PairResult:
    """Scored match between a query image and a gallery image."""
    image_a: str
    image_b: str
    n_matches: int
    mean_distance: float
    score: float
    inliers: MatchSet
    homography: Homography
    reprojection_errors: np.ndarray
    n_preliminary: int


def ransac_seed(cfg: PipelineConfig, image_a: str, image_b: str) -> int:
    """RANSAC seed of the ordered pair (image_a, image_b)."""
    return derive_seed(cfg.seed, "ransac", image_a, image_b)


def preliminary_matches(feat_a: FeatureSet, feat_b: FeatureSet, strategy: str, ratio: float) -> Optional[MatchSet]:
    """Preliminary matches, or None when B is too small for the strategy."""
    needed = 2 if strategy == "nndr" else 1
    if len(feat_a) == 0 or len(feat_b) < needed:
        return None
    return match_descriptors(feat_a.descriptors, feat_b.descriptors, strategy, ratio)


def match_pair(
    feat_a: FeatureSet,
    feat_b: FeatureSet,
    cfg: Optional[PipelineConfig] = None,
    strategy: Optional[str] = None,
) -> Optional[PairResult]:
    """
    Match A against B and score the RANSAC survivors.

    Args:
        feat_a: Query features
        feat_b: Gallery features
        cfg: Pipeline configuration (defaults when omitted)
        strategy: Overrides ``match.strategy``

    Returns:
        PairResult, or None when either set is empty, fewer than four
        matches reach RANSAC, or no consensus of four is found
    """
    cfg = cfg or PipelineConfig()
    strategy = strategy or cfg.match.strategy
    matches = preliminary_matches(feat_a, feat_b, strategy, cfg.match.ratio)
    if matches is None:
        return None

    try:
        result = ransac_filter(
            matches,
            feat_a.points(),
            feat_b.points(),
            iters=cfg.ransac.iters,
            inlier_px=cfg.ransac.inlier_px,
            seed=ransac_seed(cfg, feat_a.image_id, feat_b.image_id),
        )
    except MatchingError as e:
        logger.debug(f"{feat_a.image_id} -> {feat_b.image_id}: no match ({e})")
        return None

    distances = result.inliers.distance
    return PairResult(
        image_a=feat_a.image_id,
        image_b=feat_b.image_id,
        n_matches=len(result.inliers),
        mean_distance=float(np.mean(distances)),
        score=similarity_score(distances),
        inliers=result.inliers,
        homography=result.homography,
        reprojection_errors=result.errors,
        n_preliminary=len(matches),
    )


@dataclass(frozen=True)
class MatcherComparison:
    """Match counts of one preliminary strategy before and after RANSAC."""
    strategy: str
    n_preliminary: int
    n_inliers: int
    score: Optional[float]


def compare_matchers(feat_a: FeatureSet, feat_b: FeatureSet, cfg: Optional[PipelineConfig] = None) -> List[MatcherComparison]:
    """Run every preliminary strategy on the same pair."""
    cfg = cfg or PipelineConfig()
    rows = []
    for strategy in STRATEGIES:
        matches = preliminary_matches(feat_a, feat_b, strategy, cfg.match.ratio)
        result = match_pair(feat_a, feat_b, cfg, strategy=strategy)
        rows.append(MatcherComparison(
            strategy=strategy,
            n_preliminary=len(matches) if matches is not None else 0,
            n_inliers=result.n_matches if result is not None else 0,
            score=result.score if result is not None else None,
        ))
    return rows


def pair_report(
    feat_a: FeatureSet,
    feat_b: FeatureSet,
    cfg: PipelineConfig,
    result: Optional[PairResult],
) -> Dict[str, Any]:
    """
    JSON-ready pair-match report.

    Matches carry both endpoints' coordinates and scales so the report alone
    is enough to draw an overlay.
    """
    report: Dict[str, Any] = {
        "image_a": feat_a.image_id,
        "image_b": feat_b.image_id,
        "strategy": cfg.match.strategy,
        "ratio": cfg.match.ratio,
        "ransac": {
            "iters": cfg.ransac.iters,
            "inlier_px": cfg.ransac.inlier_px,
            "seed": ransac_seed(cfg, feat_a.image_id, feat_b.image_id),
        },
        "n_preliminary": 0,
        "n_matches": 0,
        "matched": result is not None,
        "mean_distance": None,
        "score": None,
        "homography": None,
        "matches": [],
    }
    if result is None:
        matches = preliminary_matches(feat_a, feat_b, cfg.match.strategy, cfg.match.ratio)
        report["n_preliminary"] = len(matches) if matches is not None else 0
        return report

    report.update(
        n_preliminary=result.n_preliminary,
        n_matches=result.n_matches,
        mean_distance=result.mean_distance,
        score=result.score,
        homography=result.homography.to_list(),
    )
    for match, error in zip(result.inliers, result.reprojection_errors):
        kp_a = feat_a.keypoints[match.query_idx]
        kp_b = feat_b.keypoints[match.train_idx]
        report["matches"].append({
            "query": match.query_idx,
            "train": match.train_idx,
            "distance": match.distance,
            "reprojection_error": float(error),
            "query_xy": [kp_a.x, kp_a.y],
            "train_xy": [kp_b.x, kp_b.y],
            "query_sigma": kp_a.sigma,
            "train_sigma": kp_b.sigma,
        })
    return report
