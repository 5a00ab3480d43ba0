"""Planar homographies and the normalized DLT fit."""

from dataclasses import dataclass

import numpy as np

from kakamatch.utils.exceptions import ArgumentError, FitError

DET_EPS = 1e-12
RANK_EPS = 1e-10
# Minimum triangle area, in normalized coordinates, for a point triple to count as non-collinear
COLLINEAR_EPS = 1e-3

_TRIANGLES = np.array([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


@dataclass(frozen=True, eq=False)
class Homography:
    """3x3 projective transform, scaled so the bottom-right entry is 1 when nonzero."""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64).reshape(3, 3)
        if not np.all(np.isfinite(matrix)):
            raise ArgumentError("Homography entries must be finite")
        if matrix[2, 2] != 0:
            matrix = matrix / matrix[2, 2]
        if abs(np.linalg.det(matrix)) <= DET_EPS:
            raise ArgumentError("Homography is singular")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls) -> "Homography":
        return cls(np.eye(3))

    def project(self, points: np.ndarray) -> np.ndarray:
        """Map (N, 2) points through the transform."""
        return project_points(self.matrix, points)

    def to_list(self):
        """Row-major nine values."""
        return [float(v) for v in self.matrix.ravel()]


def project_points(matrix: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Map (N, 2) points through one (3, 3) matrix, or through a (B, 3, 3) batch to (B, N, 2)."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    homogeneous = np.hstack([points, np.ones((len(points), 1))])
    mapped = homogeneous @ np.swapaxes(matrix, -1, -2)
    with np.errstate(divide="ignore", invalid="ignore"):
        return mapped[..., :2] / mapped[..., 2:3]


def normalization_transforms(points: np.ndarray) -> np.ndarray:
    """
    Similarity transforms moving each (B, n, 2) point set to zero mean and
    mean distance sqrt(2) from the origin. Coincident sets get scale 0.
    """
    centroid = points.mean(axis=1)
    spread = np.linalg.norm(points - centroid[:, None, :], axis=2).mean(axis=1)
    scale = np.where(spread > 0, np.sqrt(2.0) / np.where(spread > 0, spread, 1.0), 0.0)
    transforms = np.zeros((len(points), 3, 3))
    transforms[:, 0, 0] = scale
    transforms[:, 1, 1] = scale
    transforms[:, 0, 2] = -scale * centroid[:, 0]
    transforms[:, 1, 2] = -scale * centroid[:, 1]
    transforms[:, 2, 2] = 1.0
    return transforms


def _apply(transforms: np.ndarray, points: np.ndarray) -> np.ndarray:
    return points @ np.swapaxes(transforms[:, :2, :2], 1, 2) + transforms[:, None, :2, 2]


def has_collinear_triple(points: np.ndarray) -> np.ndarray:
    """For a (B, 4, 2) batch of normalized points, True where any three are collinear."""
    a = points[:, _TRIANGLES[:, 0]]
    b = points[:, _TRIANGLES[:, 1]]
    c = points[:, _TRIANGLES[:, 2]]
    ab, ac = b - a, c - a
    area = 0.5 * np.abs(ab[..., 0] * ac[..., 1] - ab[..., 1] * ac[..., 0])
    return area.min(axis=1) < COLLINEAR_EPS


def dlt_batch(src: np.ndarray, dst: np.ndarray):
    """
    Normalized DLT for a batch of correspondence sets.

    Args:
        src: (B, n, 2) source points
        dst: (B, n, 2) destination points

    Returns:
        (B, 3, 3) matrices and a (B,) mask of well-posed fits
    """
    t_src = normalization_transforms(src)
    t_dst = normalization_transforms(dst)
    ps = _apply(t_src, src)
    pd = _apply(t_dst, dst)

    batch, n, _ = src.shape
    x, y = ps[..., 0], ps[..., 1]
    u, v = pd[..., 0], pd[..., 1]
    zeros, ones = np.zeros_like(x), np.ones_like(x)
    system = np.empty((batch, 2 * n, 9))
    system[:, 0::2] = np.stack([x, y, ones, zeros, zeros, zeros, -u * x, -u * y, -u], axis=-1)
    system[:, 1::2] = np.stack([zeros, zeros, zeros, x, y, ones, -v * x, -v * y, -v], axis=-1)

    _, singular, vt = np.linalg.svd(system)
    normalized = vt[:, -1, :].reshape(batch, 3, 3)
    inv_dst = np.linalg.pinv(t_dst)
    matrices = inv_dst @ normalized @ t_src

    valid = singular[:, 7] > RANK_EPS * singular[:, 0]
    valid &= (t_src[:, 0, 0] > 0) & (t_dst[:, 0, 0] > 0)
    corner = matrices[:, 2, 2]
    valid &= np.abs(corner) > DET_EPS
    matrices = matrices / np.where(valid, corner, 1.0)[:, None, None]
    with np.errstate(invalid="ignore", over="ignore"):
        det = np.linalg.det(matrices)
    valid &= np.all(np.isfinite(matrices), axis=(1, 2)) & (np.abs(det) > DET_EPS)
    if n == 4:
        valid &= ~has_collinear_triple(ps) & ~has_collinear_triple(pd)
    return matrices, valid


def fit_homography(src: np.ndarray, dst: np.ndarray) -> Homography:
    """
    Fit the homography mapping ``src`` onto ``dst`` by normalized DLT.

    Exact for noise-free correspondences; least-squares in the algebraic
    sense otherwise.

    Raises:
        ArgumentError: If fewer than four pairs are given or shapes differ
        FitError: If the configuration is degenerate
    """
    src = np.asarray(src, dtype=np.float64).reshape(-1, 2)
    dst = np.asarray(dst, dtype=np.float64).reshape(-1, 2)
    if len(src) != len(dst):
        raise ArgumentError(f"{len(src)} source points but {len(dst)} destination points")
    if len(src) < 4:
        raise ArgumentError(f"A homography needs at least 4 correspondences, got {len(src)}")
    matrices, valid = dlt_batch(src[None], dst[None])
    if not valid[0]:
        raise FitError(f"Degenerate configuration of {len(src)} correspondences")
    try:
        return Homography(matrices[0])
    except ArgumentError as e:
        raise FitError(str(e))
