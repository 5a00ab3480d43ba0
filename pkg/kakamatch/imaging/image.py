"""Immutable raster containers.

Rasters wrap numpy arrays in row-major (height, width[, channel]) layout.
Arrays are copied on construction and flagged read-only, so images can be
shared between threads freely.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from kakamatch.utils.exceptions import ArgumentError

# Slack allowed on intermediate pyramid images for accumulated convolution error
RANGE_TOLERANCE = 1e-4


def _frozen(array: np.ndarray, dtype) -> np.ndarray:
    data = np.array(array, dtype=dtype, copy=True)
    data.setflags(write=False)
    return data


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit interleaved R,G,B raster."""
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or data.shape[2] != 3:
            raise ArgumentError(f"RgbImage needs a (height, width, 3) array, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ArgumentError("RgbImage dimensions must be at least 1x1")
        if data.dtype != np.uint8:
            if np.any(data < 0) or np.any(data > 255):
                raise ArgumentError("RgbImage samples must lie in [0, 255]")
        object.__setattr__(self, "data", _frozen(data, np.uint8))

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width


class _UnitRaster:
    """Shared validation for single-channel rasters with values in [0, 1]."""

    data: np.ndarray

    def _validate(self, tolerance: float) -> None:
        data = np.asarray(self.data)
        name = type(self).__name__
        if data.ndim != 2:
            raise ArgumentError(f"{name} needs a (height, width) array, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ArgumentError(f"{name} dimensions must be at least 1x1")
        data = np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(data)):
            raise ArgumentError(f"{name} samples must be finite")
        if data.min() < -tolerance or data.max() > 1.0 + tolerance:
            raise ArgumentError(f"{name} samples must lie in [0, 1]")
        object.__setattr__(self, "data", _frozen(data, np.float64))

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width


@dataclass(frozen=True, eq=False)
class GrayImage(_UnitRaster):
    """Real-valued intensity raster in [0, 1]."""
    data: np.ndarray

    def __post_init__(self):
        self._validate(RANGE_TOLERANCE)

    @classmethod
    def from_uint8(cls, samples: np.ndarray) -> "GrayImage":
        return cls(np.asarray(samples, dtype=np.float64) / 255.0)

    def to_uint8(self) -> np.ndarray:
        return quantize(self.data)


@dataclass(frozen=True, eq=False)
class SoftMask(_UnitRaster):
    """Real-valued localisation weight in [0, 1]."""
    data: np.ndarray

    def __post_init__(self):
        self._validate(0.0)


Image = Union[RgbImage, GrayImage]


def quantize(values: np.ndarray) -> np.ndarray:
    """Map [0, 1] values to 8-bit samples with half-up rounding."""
    scaled = np.floor(np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0) * 255.0 + 0.5)
    return scaled.astype(np.uint8)


def to_gray(image: RgbImage) -> GrayImage:
    """
    Convert an RGB raster to luma intensity.

    value = (0.299 R + 0.587 G + 0.114 B) / 255
    """
    rgb = image.data.astype(np.float64)
    luma = (0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]) / 255.0
    return GrayImage(np.clip(luma, 0.0, 1.0))


def as_gray(image: Image) -> GrayImage:
    """Return grayscale view of any raster (identity for GrayImage)."""
    if isinstance(image, RgbImage):
        return to_gray(image)
    return image


def crop(image, box: Tuple[int, int, int, int]):
    """
    Cut a (x, y, width, height) window out of any raster.

    Raises:
        ArgumentError: If the box is empty or leaves the image
    """
    x, y, w, h = (int(v) for v in box)
    if w < 1 or h < 1 or x < 0 or y < 0 or x + w > image.width or y + h > image.height:
        raise ArgumentError(f"Crop box {box} does not fit a {image.width}x{image.height} image")
    return type(image)(image.data[y:y + h, x:x + w])
