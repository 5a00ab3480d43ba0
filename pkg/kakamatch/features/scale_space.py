"""Gaussian scale space and difference-of-Gaussians pyramid."""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy import ndimage

from kakamatch.imaging.filters import blur_array, downsample_array
from kakamatch.imaging.image import GrayImage
from kakamatch.logger import get_logger
from kakamatch.utils.exceptions import ArgumentError

logger = get_logger(__name__)

# Smallest blur increment applied to the base image when the camera blur
# already exceeds the requested base sigma.
_MIN_BASE_BLUR = 0.1


@dataclass(frozen=True, eq=False)
class ScaleSpace:
    """
    Gaussian pyramid.

    ``octaves[o]`` is an (intervals + 3, h, w) stack whose level ``i`` has
    absolute blur ``base_sigma * k_factor**i`` in that octave's pixels.
    ``pixel_scale`` is the size of an octave-0 pixel in input pixels (0.5
    when the input was upsampled).
    """
    octaves: List[np.ndarray]
    base_sigma: float
    intervals: int
    k_factor: float
    pixel_scale: float = 1.0

    @property
    def n_octaves(self) -> int:
        return len(self.octaves)

    def level_sigma(self, level: float) -> float:
        """Blur of a (possibly fractional) level in octave pixels."""
        return self.base_sigma * 2.0 ** (level / self.intervals)

    def octave_step(self, octave: int) -> float:
        """Size of one pixel of ``octave`` in input pixels."""
        return (2.0 ** octave) * self.pixel_scale


@dataclass(frozen=True, eq=False)
class DoGPyramid:
    """Per octave, the (intervals + 2, h, w) stack of adjacent Gaussian differences."""
    octaves: List[np.ndarray]
    intervals: int


def auto_octaves(width: int, height: int, min_size: int = 16) -> int:
    """floor(log2(min_dim / min_size)) + 1"""
    return int(math.floor(math.log2(min(width, height) / min_size))) + 1


def level_increments(sigma: float, intervals: int) -> np.ndarray:
    """Incremental blurs taking level i - 1 to level i within an octave."""
    k = 2.0 ** (1.0 / intervals)
    increments = np.zeros(intervals + 3)
    increments[0] = sigma
    for level in range(1, intervals + 3):
        previous = sigma * k ** (level - 1)
        increments[level] = math.sqrt((previous * k) ** 2 - previous ** 2)
    return increments


def build_scale_space(
    image: GrayImage,
    sigma: float = 1.6,
    intervals: int = 3,
    n_octaves: Optional[int] = None,
    assumed_blur: float = 0.5,
    min_size: int = 16,
    upsample: bool = False,
) -> ScaleSpace:
    """
    Build the Gaussian pyramid of an image.

    The input is assumed to carry ``assumed_blur`` already; the base level is
    blurred up to ``sigma``. Each following level multiplies the blur by
    2^(1/intervals). The next octave starts from the level with twice the
    base blur, downsampled by two.

    Args:
        image: Input intensities
        sigma: Base blur of every octave
        intervals: Levels per doubling of blur
        n_octaves: Octave count; None picks floor(log2(min_dim / min_size)) + 1
        assumed_blur: Blur already present in the input
        min_size: Smallest image side the pyramid may reach
        upsample: Double the input first (keypoints stay in input pixels)

    Raises:
        ArgumentError: If sigma or intervals are out of range, or the image
            is smaller than min_size
    """
    if not sigma > 0:
        raise ArgumentError(f"Base sigma must be positive, got {sigma}")
    if intervals < 1:
        raise ArgumentError(f"Intervals must be at least 1, got {intervals}")
    if image.width < min_size or image.height < min_size:
        raise ArgumentError(f"Image {image.width}x{image.height} is smaller than {min_size}x{min_size}")

    data = np.asarray(image.data, dtype=np.float64)
    pixel_scale = 1.0
    camera_blur = assumed_blur
    if upsample:
        data = ndimage.zoom(data, 2, order=1, mode="nearest")
        pixel_scale = 0.5
        camera_blur = 2.0 * assumed_blur

    height, width = data.shape
    available = auto_octaves(width, height, min_size)
    if n_octaves is None:
        n_octaves = available
    elif n_octaves > available:
        logger.debug(f"Requested {n_octaves} octaves, image supports {available}")
        n_octaves = available

    base_blur = math.sqrt(max(sigma ** 2 - camera_blur ** 2, _MIN_BASE_BLUR ** 2))
    current = blur_array(data, base_blur)
    increments = level_increments(sigma, intervals)

    octaves: List[np.ndarray] = []
    for octave in range(n_octaves):
        levels = [current]
        for increment in increments[1:]:
            levels.append(blur_array(levels[-1], increment))
        stack = np.stack(levels)
        stack.setflags(write=False)
        octaves.append(stack)
        if octave + 1 < n_octaves:
            current = downsample_array(levels[intervals])

    logger.debug(f"Scale space: {n_octaves} octaves from {width}x{height}")
    return ScaleSpace(
        octaves=octaves,
        base_sigma=sigma,
        intervals=intervals,
        k_factor=2.0 ** (1.0 / intervals),
        pixel_scale=pixel_scale,
    )


def build_dog(ss: ScaleSpace) -> DoGPyramid:
    """DoG[i] = Gaussian[i + 1] - Gaussian[i], per octave."""
    octaves = []
    for stack in ss.octaves:
        dog = np.diff(stack, axis=0)
        dog.setflags(write=False)
        octaves.append(dog)
    return DoGPyramid(octaves=octaves, intervals=ss.intervals)
