"""Lloyd's k-means over per-pixel colour or intensity vectors."""

from dataclasses import dataclass, field
from typing import List, Union

import numpy as np
from scipy.spatial.distance import cdist

from kakamatch.imaging.image import GrayImage, RgbImage
from kakamatch.logger import get_logger
from kakamatch.utils.exceptions import ArgumentError

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class LabelMap:
    """Per-pixel cluster assignment plus the centroids that produced it."""
    labels: np.ndarray
    centroids: np.ndarray
    sse_history: List[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return int(self.centroids.shape[0])

    @property
    def width(self) -> int:
        return int(self.labels.shape[1])

    @property
    def height(self) -> int:
        return int(self.labels.shape[0])

    def luminance(self) -> np.ndarray:
        """Centroid brightness: the value itself for gray, luma for RGB."""
        if self.centroids.shape[1] == 1:
            return self.centroids[:, 0].copy()
        return self.centroids @ np.array([0.299, 0.587, 0.114])

    def permuted(self, order) -> "LabelMap":
        """Relabel cluster ``order[i]`` as ``i``."""
        order = np.asarray(order)
        inverse = np.argsort(order)
        return LabelMap(inverse[self.labels], self.centroids[order], list(self.sse_history))


def pixel_features(image: Union[GrayImage, RgbImage]) -> np.ndarray:
    """Flatten an image into (N, d) feature vectors scaled to [0, 1]."""
    if isinstance(image, RgbImage):
        return image.data.reshape(-1, 3).astype(np.float64) / 255.0
    return image.data.reshape(-1, 1).astype(np.float64)


def _assign(features: np.ndarray, centroids: np.ndarray):
    dist = cdist(features, centroids, metric="sqeuclidean")
    labels = np.argmin(dist, axis=1)
    return labels, dist[np.arange(len(labels)), labels]


def kmeans_segment(
    image: Union[GrayImage, RgbImage],
    k: int = 2,
    seed: int = 0,
    max_iters: int = 100,
    tol: float = 1e-4,
) -> LabelMap:
    """
    Cluster pixels with Lloyd iterations.

    Centroids start at k distinct pixels drawn uniformly with ``seed``. A
    cluster that empties is re-seeded to the pixel farthest from its own
    centroid. Iteration stops when no centroid moves by ``tol`` or more, or
    after ``max_iters`` updates. Ties in assignment go to the lowest cluster
    index, so the result is a pure function of (image, k, seed).

    Args:
        image: Gray or RGB raster
        k: Cluster count
        seed: RNG seed for initialisation
        max_iters: Maximum number of centroid updates
        tol: Centroid-shift tolerance

    Returns:
        LabelMap with labels, centroids and the per-iteration SSE

    Raises:
        ArgumentError: If k < 1 or k exceeds the pixel count
    """
    if k < 1:
        raise ArgumentError(f"k must be at least 1, got {k}")
    features = pixel_features(image)
    n_pixels = features.shape[0]
    if k > n_pixels:
        raise ArgumentError(f"k={k} exceeds the {n_pixels} available pixels")

    rng = np.random.default_rng(seed)
    centroids = features[rng.choice(n_pixels, size=k, replace=False)].copy()
    sse_history: List[float] = []

    for iteration in range(max_iters):
        labels, sq_dist = _assign(features, centroids)
        sse_history.append(float(sq_dist.sum()))

        updated = centroids.copy()
        counts = np.bincount(labels, minlength=k)
        for cluster in range(k):
            if counts[cluster]:
                updated[cluster] = features[labels == cluster].mean(axis=0)
            else:
                farthest = int(np.argmax(sq_dist))
                updated[cluster] = features[farthest]
                sq_dist[farthest] = -1.0

        shift = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if shift < tol:
            logger.debug(f"k-means converged after {iteration + 1} iterations")
            break

    labels, sq_dist = _assign(features, centroids)
    sse_history.append(float(sq_dist.sum()))

    height, width = image.data.shape[:2]
    return LabelMap(labels.reshape(height, width), centroids, sse_history)
