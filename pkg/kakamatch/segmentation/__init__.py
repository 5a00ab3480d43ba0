"""Object localisation: k-means segmentation and mask algebra."""

from kakamatch.segmentation.kmeans import LabelMap, kmeans_segment
from kakamatch.segmentation.masks import (
    BinaryMask,
    background_mask,
    normalize_mask,
    remove_small_blobs,
    superimpose,
)
from kakamatch.segmentation.localisation import build_localisation_mask
from kakamatch.segmentation.frames import select_frame

__all__ = [
    'LabelMap',
    'kmeans_segment',
    'BinaryMask',
    'background_mask',
    'normalize_mask',
    'remove_small_blobs',
    'superimpose',
    'build_localisation_mask',
    'select_frame',
]
