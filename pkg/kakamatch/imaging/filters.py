"""Convolution and resampling primitives.

All filters use clamp-to-edge borders (scipy ``mode="nearest"``).
"""

import math

import numpy as np
from scipy import ndimage

from kakamatch.imaging.image import GrayImage, SoftMask
from kakamatch.utils.exceptions import ArgumentError


def gaussian_kernel(sigma: float) -> np.ndarray:
    """
    Sampled 1-D Gaussian over radius ceil(3 sigma), normalized to sum 1.

    Raises:
        ArgumentError: If sigma is not positive
    """
    if not sigma > 0:
        raise ArgumentError(f"sigma must be positive, got {sigma}")
    radius = int(math.ceil(3.0 * sigma))
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets ** 2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def blur_array(data: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur of a raw 2-D array (no range checks)."""
    kernel = gaussian_kernel(sigma)
    out = ndimage.convolve1d(np.asarray(data, dtype=np.float64), kernel, axis=0, mode="nearest")
    return ndimage.convolve1d(out, kernel, axis=1, mode="nearest")


def gaussian_blur(image: GrayImage, sigma: float) -> GrayImage:
    """
    Convolve with a separable Gaussian of standard deviation ``sigma``.

    Raises:
        ArgumentError: If sigma is not positive
    """
    return GrayImage(np.clip(blur_array(image.data, sigma), 0.0, 1.0))


def downsample_array(data: np.ndarray) -> np.ndarray:
    """Keep every second row and column, starting at (0, 0)."""
    height, width = data.shape
    if width < 2 or height < 2:
        raise ArgumentError(f"Cannot halve a {width}x{height} image")
    return np.ascontiguousarray(data[0:2 * (height // 2):2, 0:2 * (width // 2):2])


def downsample_half(image: GrayImage) -> GrayImage:
    """
    Halve both dimensions by nearest sampling at (2x, 2y).

    No prefilter is applied; pyramid levels are already blurred.

    Raises:
        ArgumentError: If either dimension is below 2
    """
    return GrayImage(downsample_array(image.data))


def mean_blur(mask: SoftMask, k: int) -> SoftMask:
    """
    Replace every value by the mean of its k x k clamp-to-edge neighbourhood.

    Raises:
        ArgumentError: If k is even or not positive
    """
    if k < 1 or k % 2 == 0:
        raise ArgumentError(f"Window size must be odd and positive, got {k}")
    if k == 1:
        return mask
    out = ndimage.uniform_filter(mask.data, size=k, mode="nearest")
    return SoftMask(np.clip(out, 0.0, 1.0))
