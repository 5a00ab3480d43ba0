"""Scale-space extrema detection, sub-pixel refinement and orientation assignment."""

import math
from dataclasses import dataclass, replace
from typing import List, NamedTuple

import numpy as np
from scipy import ndimage

from kakamatch.features.scale_space import DoGPyramid, ScaleSpace
from kakamatch.logger import get_logger

logger = get_logger(__name__)

TWO_PI = 2.0 * math.pi

# 3x3x3 neighbourhood without its centre
_NEIGHBOURS = np.ones((3, 3, 3), dtype=bool)
_NEIGHBOURS[1, 1, 1] = False

MAX_REFINE_STEPS = 5
ORIENTATION_BINS = 36
ORIENTATION_PEAK_RATIO = 0.8
ORIENTATION_SIGMA_FACTOR = 1.5
ORIENTATION_RADIUS_FACTOR = 3.0


@dataclass(frozen=True)
class Keypoint:
    """
    Scale-space interest point.

    x, y are in input-image pixels. ``interval`` is the refined fractional
    level inside ``octave``; ``sigma`` is the absolute scale in input
    pixels. ``orientation`` is 0 until assigned.
    """
    x: float
    y: float
    octave: int
    interval: float
    sigma: float
    orientation: float = 0.0
    response: float = 0.0


class Candidate(NamedTuple):
    """Discrete DoG extremum: octave, DoG level, row, column."""
    octave: int
    level: int
    y: int
    x: int


def detect_extrema(dog: DoGPyramid) -> List[Candidate]:
    """
    Find strict 26-neighbour extrema of the DoG pyramid.

    Only levels 1..intervals of each octave and points at least one pixel
    from the border are considered. Points tied with any neighbour are never
    extrema.
    """
    candidates: List[Candidate] = []
    for octave, stack in enumerate(dog.octaves):
        levels, height, width = stack.shape
        if height < 3 or width < 3:
            continue
        upper = ndimage.maximum_filter(stack, footprint=_NEIGHBOURS, mode="nearest")
        lower = ndimage.minimum_filter(stack, footprint=_NEIGHBOURS, mode="nearest")
        extremum = (stack > upper) | (stack < lower)

        interior = np.zeros_like(extremum)
        interior[1:dog.intervals + 1, 1:-1, 1:-1] = True
        for level, y, x in np.argwhere(extremum & interior):
            candidates.append(Candidate(octave, int(level), int(y), int(x)))

    logger.debug(f"Detected {len(candidates)} extrema")
    return candidates


def _derivatives(stack: np.ndarray, level: int, y: int, x: int):
    cube = stack[level - 1:level + 2, y - 1:y + 2, x - 1:x + 2]
    centre = cube[1, 1, 1]
    gradient = 0.5 * np.array([
        cube[1, 1, 2] - cube[1, 1, 0],
        cube[1, 2, 1] - cube[1, 0, 1],
        cube[2, 1, 1] - cube[0, 1, 1],
    ])
    dxx = cube[1, 1, 2] - 2.0 * centre + cube[1, 1, 0]
    dyy = cube[1, 2, 1] - 2.0 * centre + cube[1, 0, 1]
    dss = cube[2, 1, 1] - 2.0 * centre + cube[0, 1, 1]
    dxy = 0.25 * (cube[1, 2, 2] - cube[1, 2, 0] - cube[1, 0, 2] + cube[1, 0, 0])
    dxs = 0.25 * (cube[2, 1, 2] - cube[2, 1, 0] - cube[0, 1, 2] + cube[0, 1, 0])
    dys = 0.25 * (cube[2, 2, 1] - cube[2, 0, 1] - cube[0, 2, 1] + cube[0, 0, 1])
    hessian = np.array([
        [dxx, dxy, dxs],
        [dxy, dyy, dys],
        [dxs, dys, dss],
    ])
    return centre, gradient, hessian


def passes_edge_test(hessian_xy: np.ndarray, edge_ratio: float) -> bool:
    """Principal-curvature ratio test on the spatial Hessian."""
    trace = hessian_xy[0, 0] + hessian_xy[1, 1]
    det = hessian_xy[0, 0] * hessian_xy[1, 1] - hessian_xy[0, 1] ** 2
    if det <= 0:
        return False
    return edge_ratio * trace * trace < (edge_ratio + 1.0) ** 2 * det


def refine_keypoints(
    candidates: List[Candidate],
    dog: DoGPyramid,
    ss: ScaleSpace,
    contrast_thresh: float = 0.03,
    edge_ratio: float = 10.0,
) -> List[Keypoint]:
    """
    Localise candidates to sub-pixel accuracy and drop weak or edge-like ones.

    A quadratic fit of D around the candidate gives an offset in
    (x, y, level); when any component is 0.5 or more the candidate moves to
    the nearest sample and the fit is repeated, at most five times. A
    candidate that leaves the valid levels or the 1-pixel interior, or never
    settles, is dropped. Survivors must reach |D| >= contrast_thresh at the
    fitted extremum and pass the edge test with ``edge_ratio``. Candidates
    with |D| below half the threshold are skipped before fitting.

    Returns:
        Unoriented keypoints, one per distinct converged sample
    """
    keypoints: List[Keypoint] = []
    seen = set()
    intervals = dog.intervals
    prefilter = 0.5 * contrast_thresh

    for candidate in candidates:
        stack = dog.octaves[candidate.octave]
        _, height, width = stack.shape
        level, y, x = candidate.level, candidate.y, candidate.x
        if abs(stack[level, y, x]) < prefilter:
            continue

        converged = False
        for _ in range(MAX_REFINE_STEPS):
            value, gradient, hessian = _derivatives(stack, level, y, x)
            offset = -np.linalg.lstsq(hessian, gradient, rcond=None)[0]
            if np.all(np.abs(offset) < 0.5):
                converged = True
                break
            x += int(round(offset[0]))
            y += int(round(offset[1]))
            level += int(round(offset[2]))
            if not (1 <= level <= intervals and 1 <= y < height - 1 and 1 <= x < width - 1):
                break
        if not converged:
            continue

        key = (candidate.octave, level, y, x)
        if key in seen:
            continue

        contrast = value + 0.5 * float(gradient @ offset)
        if abs(contrast) < contrast_thresh:
            continue
        if not passes_edge_test(hessian[:2, :2], edge_ratio):
            continue

        seen.add(key)
        step = ss.octave_step(candidate.octave)
        interval = level + float(offset[2])
        keypoints.append(Keypoint(
            x=(x + float(offset[0])) * step,
            y=(y + float(offset[1])) * step,
            octave=candidate.octave,
            interval=interval,
            sigma=ss.level_sigma(interval) * step,
            response=abs(float(contrast)),
        ))

    logger.debug(f"Refined {len(candidates)} candidates to {len(keypoints)} keypoints")
    return keypoints


def octave_position(kp: Keypoint, ss: ScaleSpace):
    """Keypoint location, blur and nearest level in its own octave's pixels."""
    step = ss.octave_step(kp.octave)
    level = int(min(max(round(kp.interval), 0), ss.intervals + 2))
    return kp.x / step, kp.y / step, kp.sigma / step, level


def gradient_histogram(image: np.ndarray, cx: float, cy: float, scale: float) -> np.ndarray:
    """
    Gaussian-weighted 36-bin histogram of gradient directions around (cx, cy).

    Gradients are central differences; pixels without a full 4-neighbourhood
    are skipped.
    """
    height, width = image.shape
    sigma_w = ORIENTATION_SIGMA_FACTOR * scale
    radius = int(round(ORIENTATION_RADIUS_FACTOR * sigma_w))
    px, py = int(round(cx)), int(round(cy))

    x0, x1 = max(px - radius, 1), min(px + radius, width - 2)
    y0, y1 = max(py - radius, 1), min(py + radius, height - 2)
    histogram = np.zeros(ORIENTATION_BINS)
    if x0 > x1 or y0 > y1:
        return histogram

    ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    dx = image[ys, xs + 1] - image[ys, xs - 1]
    dy = image[ys + 1, xs] - image[ys - 1, xs]
    magnitude = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)
    weight = np.exp(-((xs - px) ** 2 + (ys - py) ** 2) / (2.0 * sigma_w * sigma_w))

    bins = np.round(theta * ORIENTATION_BINS / TWO_PI).astype(np.int64) % ORIENTATION_BINS
    np.add.at(histogram, bins.ravel(), (weight * magnitude).ravel())
    return histogram


def histogram_peaks(histogram: np.ndarray, peak_ratio: float = ORIENTATION_PEAK_RATIO) -> List[float]:
    """
    Dominant directions of a circular orientation histogram, in radians.

    Every local maximum reaching ``peak_ratio`` of the global maximum is
    refined by a three-point parabola. A flat run of equal maxima reports its
    first bin.
    """
    n_bins = len(histogram)
    peak = float(histogram.max())
    if peak <= 0:
        return []

    left = np.roll(histogram, 1)
    right = np.roll(histogram, -1)
    is_peak = (histogram > left) & (histogram >= right) & (histogram >= peak_ratio * peak)
    indices = list(np.flatnonzero(is_peak))
    if not indices:
        indices = [int(np.argmax(histogram))]

    orientations = []
    for index in indices:
        l, c, r = left[index], histogram[index], right[index]
        denominator = l - 2.0 * c + r
        shift = 0.5 * (l - r) / denominator if denominator != 0 else 0.0
        angle = ((index + shift) * TWO_PI / n_bins) % TWO_PI
        if angle >= TWO_PI:
            angle = 0.0
        orientations.append(float(angle))
    return orientations


def assign_orientations(kp: Keypoint, ss: ScaleSpace) -> List[Keypoint]:
    """
    Copies of ``kp`` for each dominant gradient direction around it.

    Directions follow atan2(dy, dx) in image coordinates (y down), so a
    brightness ramp increasing along +x gives 0 and along +y gives pi/2.
    """
    cx, cy, scale, level = octave_position(kp, ss)
    image = ss.octaves[kp.octave][level]
    histogram = gradient_histogram(image, cx, cy, scale)
    return [replace(kp, orientation=angle) for angle in histogram_peaks(histogram)]
