"""Binary mask algebra: normalization, blob removal and superimposition."""

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import ndimage

from kakamatch.imaging.image import SoftMask
from kakamatch.segmentation.kmeans import LabelMap
from kakamatch.utils.exceptions import ArgumentError

BackgroundPolicy = Literal["brighter-is-background", "border-majority"]

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Raster of exact 0/1 values."""
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ArgumentError(f"BinaryMask needs a non-empty (height, width) array, got shape {data.shape}")
        if not np.all((data == 0) | (data == 1)):
            raise ArgumentError("BinaryMask values must be exactly 0 or 1")
        frozen = data.astype(np.uint8)
        frozen.setflags(write=False)
        object.__setattr__(self, "data", frozen)

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def area(self) -> int:
        return int(self.data.sum())

    def inverted(self) -> "BinaryMask":
        return BinaryMask(1 - self.data)


def _border_counts(labels: np.ndarray, k: int) -> np.ndarray:
    border = np.concatenate([labels[0, :], labels[-1, :], labels[1:-1, 0], labels[1:-1, -1]])
    return np.bincount(border, minlength=k)


def background_cluster(labels: LabelMap, policy: BackgroundPolicy = "brighter-is-background") -> int:
    """
    Pick the background cluster of a two-cluster LabelMap.

    Ties on the policy's primary criterion fall back to the other criterion,
    then to pixel count, so the choice never depends on cluster numbering
    unless the two clusters are indistinguishable.
    """
    if labels.k != 2:
        raise ArgumentError(f"Mask normalization needs k=2, got k={labels.k}")

    luminance = labels.luminance()
    border = _border_counts(labels.labels, 2)
    sizes = np.bincount(labels.labels.ravel(), minlength=2)

    if policy == "brighter-is-background":
        keys = [luminance, border, sizes]
    elif policy == "border-majority":
        keys = [border, luminance, sizes]
    else:
        raise ArgumentError(f"Unknown background policy {policy!r}")

    for key in keys:
        if key[0] != key[1]:
            return int(np.argmax(key))
    return 0


def normalize_mask(labels: LabelMap, policy: BackgroundPolicy = "brighter-is-background") -> BinaryMask:
    """
    Map a two-cluster segmentation to background 0 / foreground 1.

    ``brighter-is-background`` treats the cluster with the brighter centroid
    as background; ``border-majority`` treats the cluster owning most border
    pixels as background.

    Raises:
        ArgumentError: If the LabelMap does not have exactly two clusters
    """
    background = background_cluster(labels, policy)
    return BinaryMask((labels.labels != background).astype(np.uint8))


def background_mask(labels: LabelMap, policy: BackgroundPolicy = "brighter-is-background") -> BinaryMask:
    """Mask of a subject-free background frame: nozzle cluster 0, everything else 1."""
    return normalize_mask(labels, policy).inverted()


def remove_small_blobs(mask: BinaryMask, min_area: int) -> BinaryMask:
    """
    Zero every 8-connected foreground component with area < min_area.

    Components at or above ``min_area`` and all 0-regions are untouched.
    """
    components, count = ndimage.label(mask.data, structure=_EIGHT_CONNECTED)
    if count == 0:
        return mask
    areas = np.bincount(components.ravel())
    keep = areas >= min_area
    keep[0] = False
    return BinaryMask(keep[components].astype(np.uint8))


def superimpose(fg: BinaryMask, bg: BinaryMask) -> SoftMask:
    """
    Combine a foreground mask with a background mask.

    The result is 1.0 exactly where fg + bg == 2 and 0.0 elsewhere.

    Raises:
        ArgumentError: On dimension mismatch
    """
    if fg.data.shape != bg.data.shape:
        raise ArgumentError(f"Mask dimensions differ: {fg.data.shape} vs {bg.data.shape}")
    total = fg.data.astype(np.int32) + bg.data.astype(np.int32)
    return SoftMask((total == 2).astype(np.float64))
