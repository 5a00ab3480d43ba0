"""End-to-end SIFT extraction with optional localisation-mask filtering."""

import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from kakamatch.config import PipelineConfig
from kakamatch.features.descriptors import DESCRIPTOR_SIZE, compute_descriptor
from kakamatch.features.keypoints import Keypoint, assign_orientations, detect_extrema, refine_keypoints
from kakamatch.features.scale_space import build_dog, build_scale_space
from kakamatch.imaging.image import GrayImage, RgbImage, SoftMask, as_gray
from kakamatch.logger import get_logger
from kakamatch.utils.exceptions import ArgumentError, DescriptorWindowError

logger = get_logger(__name__)


@dataclass(eq=False)
class FeatureSet:
    """Keypoints of one image with their descriptors, row i describing keypoint i."""
    keypoints: List[Keypoint] = field(default_factory=list)
    descriptors: np.ndarray = field(default_factory=lambda: np.zeros((0, DESCRIPTOR_SIZE)))
    image_id: str = ""

    def __post_init__(self):
        self.descriptors = np.asarray(self.descriptors, dtype=np.float64).reshape(-1, DESCRIPTOR_SIZE)
        if len(self.keypoints) != self.descriptors.shape[0]:
            raise ArgumentError(
                f"{len(self.keypoints)} keypoints but {self.descriptors.shape[0]} descriptors"
            )

    def __len__(self) -> int:
        return len(self.keypoints)

    def __iter__(self) -> Iterator[Tuple[Keypoint, np.ndarray]]:
        return iter(zip(self.keypoints, self.descriptors))

    def points(self) -> np.ndarray:
        """(N, 2) array of keypoint (x, y)."""
        if not self.keypoints:
            return np.zeros((0, 2))
        return np.array([(kp.x, kp.y) for kp in self.keypoints], dtype=np.float64)


def mask_value(mask: SoftMask, x: float, y: float) -> float:
    """Mask value at the pixel nearest (x, y), rounding halves up."""
    col = min(max(int(math.floor(x + 0.5)), 0), mask.width - 1)
    row = min(max(int(math.floor(y + 0.5)), 0), mask.height - 1)
    return float(mask.data[row, col])


def _sort_key(kp: Keypoint):
    return kp.octave, kp.y, kp.x, kp.orientation, kp.sigma


def extract(
    image: Union[GrayImage, RgbImage],
    mask: Optional[SoftMask] = None,
    cfg: Optional[PipelineConfig] = None,
    image_id: str = "",
) -> FeatureSet:
    """
    Detect, refine, orient and describe SIFT features.

    With a mask, keypoints whose mask value at the rounded location is below
    ``mask.keypoint_threshold`` are dropped before orientation assignment.
    Keypoints whose descriptor window leaves the image are dropped too.

    Args:
        image: Input raster (RGB is converted to luma)
        mask: Optional localisation mask with the image's dimensions
        cfg: Pipeline configuration (defaults when omitted)
        image_id: Identifier stored on the result

    Returns:
        FeatureSet ordered by (octave, y, x, orientation)

    Raises:
        ArgumentError: If the mask and image differ in size or the image is
            too small for the pyramid
    """
    cfg = cfg or PipelineConfig()
    gray = as_gray(image)
    if mask is not None and mask.shape != gray.shape:
        raise ArgumentError(f"Mask {mask.width}x{mask.height} does not match image {gray.width}x{gray.height}")

    sift = cfg.sift
    ss = build_scale_space(
        gray,
        sigma=sift.sigma,
        intervals=sift.intervals,
        n_octaves=sift.n_octaves,
        assumed_blur=sift.assumed_blur,
        min_size=sift.min_size,
        upsample=sift.upsample,
    )
    dog = build_dog(ss)
    keypoints = refine_keypoints(detect_extrema(dog), dog, ss, sift.contrast_thresh, sift.edge_ratio)

    if mask is not None:
        threshold = cfg.mask.keypoint_threshold
        keypoints = [kp for kp in keypoints if mask_value(mask, kp.x, kp.y) >= threshold]

    features: List[Tuple[Keypoint, np.ndarray]] = []
    dropped = 0
    for kp in keypoints:
        for oriented in assign_orientations(kp, ss):
            try:
                features.append((oriented, compute_descriptor(oriented, ss)))
            except DescriptorWindowError as e:
                dropped += 1
                logger.debug(str(e))

    features.sort(key=lambda item: _sort_key(item[0]))
    logger.debug(
        f"Extracted {len(features)} features from {image_id or 'image'} "
        f"({len(keypoints)} keypoints, {dropped} windows dropped)"
    )
    if not features:
        return FeatureSet(image_id=image_id)
    return FeatureSet(
        keypoints=[kp for kp, _ in features],
        descriptors=np.stack([d for _, d in features]),
        image_id=image_id,
    )
