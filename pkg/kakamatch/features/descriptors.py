"""128-element gradient-orientation descriptors."""

import numpy as np

from kakamatch.features.keypoints import TWO_PI, Keypoint, octave_position
from kakamatch.features.scale_space import ScaleSpace
from kakamatch.utils.exceptions import DescriptorWindowError

GRID = 16
CELLS = 4
ORIENTATION_BINS = 8
CLAMP = 0.2
DESCRIPTOR_SIZE = CELLS * CELLS * ORIENTATION_BINS

# Each 4x4-sample cell spans three octave-level sigmas
CELL_SIGMAS = 3.0
# Gaussian weight sigma in sample units: half the descriptor width
WEIGHT_SIGMA = GRID / 2.0

_OFFSETS = np.arange(GRID) - (GRID - 1) / 2.0
_V, _U = np.meshgrid(_OFFSETS, _OFFSETS, indexing="ij")
_WEIGHTS = np.exp(-(_U ** 2 + _V ** 2) / (2.0 * WEIGHT_SIGMA ** 2))
# Continuous cell coordinate of each sample, cell centres at 0..3
_CELL_COORD = (np.arange(GRID) + 0.5) / (GRID / CELLS) - 0.5
_ROW_BIN = np.repeat(_CELL_COORD, GRID).reshape(GRID, GRID)
_COL_BIN = np.tile(_CELL_COORD, GRID).reshape(GRID, GRID)


def compute_descriptor(kp: Keypoint, ss: ScaleSpace) -> np.ndarray:
    """
    Describe an oriented keypoint.

    A 16x16 grid of samples, spaced 3/4 of the keypoint's octave sigma and
    rotated by its orientation, is taken from the Gaussian level nearest the
    keypoint. Gradient magnitudes, Gaussian-weighted and measured relative to
    the keypoint orientation, are spread trilinearly into 4x4 cells of 8
    orientation bins. The vector is normalized, clamped at 0.2 and
    normalized again.

    Raises:
        DescriptorWindowError: If any sample lacks a full neighbourhood in
            the image, or the window has no gradient
    """
    cx, cy, scale, level = octave_position(kp, ss)
    image = ss.octaves[kp.octave][level]
    height, width = image.shape

    spacing = CELL_SIGMAS * scale * CELLS / GRID
    cos_t, sin_t = np.cos(kp.orientation), np.sin(kp.orientation)
    xs = np.rint(cx + spacing * (_U * cos_t - _V * sin_t)).astype(np.int64)
    ys = np.rint(cy + spacing * (_U * sin_t + _V * cos_t)).astype(np.int64)
    if xs.min() < 1 or ys.min() < 1 or xs.max() > width - 2 or ys.max() > height - 2:
        raise DescriptorWindowError(f"Descriptor window of keypoint at ({kp.x:.1f}, {kp.y:.1f}) leaves the image")

    dx = image[ys, xs + 1] - image[ys, xs - 1]
    dy = image[ys + 1, xs] - image[ys - 1, xs]
    magnitude = np.hypot(dx, dy) * _WEIGHTS
    theta = (np.arctan2(dy, dx) - kp.orientation) % TWO_PI
    orientation_bin = theta * ORIENTATION_BINS / TWO_PI

    row_floor = np.floor(_ROW_BIN).astype(np.int64)
    col_floor = np.floor(_COL_BIN).astype(np.int64)
    ori_floor = np.floor(orientation_bin).astype(np.int64)
    row_frac = _ROW_BIN - row_floor
    col_frac = _COL_BIN - col_floor
    ori_frac = orientation_bin - ori_floor

    # Padded by one cell on each side so edge samples can spill over
    histogram = np.zeros((CELLS + 2, CELLS + 2, ORIENTATION_BINS))
    for d_row, w_row in ((0, 1.0 - row_frac), (1, row_frac)):
        for d_col, w_col in ((0, 1.0 - col_frac), (1, col_frac)):
            for d_ori, w_ori in ((0, 1.0 - ori_frac), (1, ori_frac)):
                np.add.at(
                    histogram,
                    (
                        (row_floor + 1 + d_row).ravel(),
                        (col_floor + 1 + d_col).ravel(),
                        ((ori_floor + d_ori) % ORIENTATION_BINS).ravel(),
                    ),
                    (magnitude * w_row * w_col * w_ori).ravel(),
                )

    vector = histogram[1:-1, 1:-1, :].ravel()
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise DescriptorWindowError(f"Keypoint at ({kp.x:.1f}, {kp.y:.1f}) has no gradient in its window")
    vector = np.minimum(vector / norm, CLAMP)
    return vector / np.linalg.norm(vector)
