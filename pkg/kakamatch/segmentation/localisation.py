"""Subject localisation mask from a frame and a subject-free background."""

import math
from typing import Union

import numpy as np

from kakamatch.config import PipelineConfig
from kakamatch.imaging.filters import mean_blur
from kakamatch.imaging.image import GrayImage, RgbImage, SoftMask
from kakamatch.logger import get_logger
from kakamatch.segmentation.kmeans import kmeans_segment
from kakamatch.segmentation.masks import BinaryMask, background_mask, normalize_mask, remove_small_blobs, superimpose
from kakamatch.utils.exceptions import ArgumentError
from kakamatch.utils.seeding import derive_seed

logger = get_logger(__name__)

Raster = Union[GrayImage, RgbImage]


def min_blob_area(width: int, height: int, fraction: float) -> int:
    """Smallest blob area kept for an image of the given size."""
    return int(math.ceil(fraction * width * height))


def build_localisation_mask(
    foreground: Raster,
    background: Raster,
    cfg: PipelineConfig,
    image_id: str = "",
) -> SoftMask:
    """
    Build the blurred subject mask for one frame.

    Both images are split into two clusters. The frame's foreground cluster
    loses every blob smaller than ``mask.min_blob_frac`` of the image, the
    background frame marks its dark cluster (the nozzle) as 0, and the two
    are combined so only pixels that are foreground in the frame and not
    nozzle in the background keep 1. The product loses its small blobs too,
    then a ``mask.blur`` mean filter softens the edges.

    Args:
        foreground: Frame containing the subject
        background: Frame of the same scene without the subject
        cfg: Pipeline configuration
        image_id: Frame identifier, mixed into the k-means seeds

    Returns:
        SoftMask with the frame's dimensions

    Raises:
        ArgumentError: If the two images differ in size
    """
    if foreground.shape != background.shape:
        raise ArgumentError(
            f"Foreground {foreground.width}x{foreground.height} and background "
            f"{background.width}x{background.height} differ in size"
        )

    seed = cfg.kmeans_seed
    fg_labels = kmeans_segment(
        foreground, k=2, seed=derive_seed(seed, "kmeans", "fg", image_id),
        max_iters=cfg.kmeans.max_iters, tol=cfg.kmeans.tol,
    )
    bg_labels = kmeans_segment(
        background, k=2, seed=derive_seed(seed, "kmeans", "bg", image_id),
        max_iters=cfg.kmeans.max_iters, tol=cfg.kmeans.tol,
    )

    min_area = min_blob_area(foreground.width, foreground.height, cfg.mask.min_blob_frac)
    fg_mask = remove_small_blobs(normalize_mask(fg_labels, cfg.mask.bg_policy), min_area)
    bg_mask = background_mask(bg_labels, cfg.mask.bg_policy)

    # isolated pixels can pass both masks; they must not reach the blur
    product = remove_small_blobs(BinaryMask(superimpose(fg_mask, bg_mask).data), min_area)
    combined = SoftMask(product.data.astype(np.float64))
    logger.debug(
        f"Mask {image_id or '<anonymous>'}: fg={fg_mask.area} bg={bg_mask.area} "
        f"combined={int(combined.data.sum())} (min_area={min_area})"
    )
    return mean_blur(combined, cfg.mask.blur)
