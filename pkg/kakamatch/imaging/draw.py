"""Match overlays drawn with OpenCV on a side-by-side canvas."""

from typing import Sequence, Tuple

import cv2
import numpy as np

from kakamatch.imaging.image import RgbImage, as_gray

Color = Tuple[int, int, int]
MatchedPair = Tuple[Tuple[float, float, float], Tuple[float, float, float]]

PALETTE: Sequence[Color] = (
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
)


def _pixel(x: float, y: float) -> Tuple[int, int]:
    return int(round(x)), int(round(y))


def _rgb_samples(image) -> np.ndarray:
    if isinstance(image, RgbImage):
        return np.asarray(image.data)
    gray = as_gray(image).to_uint8()
    return np.repeat(gray[:, :, None], 3, axis=2)


def side_by_side(image_a, image_b) -> np.ndarray:
    """Writable (max(hA, hB), wA + wB, 3) canvas with A on the left, black padding."""
    a, b = _rgb_samples(image_a), _rgb_samples(image_b)
    height = max(a.shape[0], b.shape[0])
    canvas = np.zeros((height, a.shape[1] + b.shape[1], 3), dtype=np.uint8)
    canvas[:a.shape[0], :a.shape[1]] = a
    canvas[:b.shape[0], a.shape[1]:] = b
    return canvas


def render_matches(image_a, image_b, matches: Sequence[MatchedPair]) -> RgbImage:
    """
    Overlay matched keypoints on a side-by-side canvas.

    Each match is ``((xa, ya, sigma_a), (xb, yb, sigma_b))`` in image
    coordinates. Keypoints get a circle of radius sigma (at least one pixel)
    and a line joins the two ends; B's x coordinates are shifted by A's width.
    Colours cycle through ``PALETTE`` in match order.
    """
    canvas = side_by_side(image_a, image_b)
    offset = float(image_a.width)
    for i, ((xa, ya, sa), (xb, yb, sb)) in enumerate(matches):
        color = PALETTE[i % len(PALETTE)]
        start = _pixel(xa, ya)
        end = _pixel(xb + offset, yb)
        cv2.circle(canvas, start, max(int(round(sa)), 1), color, 1)
        cv2.circle(canvas, end, max(int(round(sb)), 1), color, 1)
        cv2.line(canvas, start, end, color, 1)
    return RgbImage(canvas)
