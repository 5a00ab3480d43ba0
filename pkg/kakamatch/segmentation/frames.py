"""Frame-selection heuristic for feeder footage."""

from typing import Tuple, Union

from kakamatch.imaging.image import GrayImage, RgbImage, as_gray

# A visitor on the feeder covers this point; an empty feeder shows the cover.
PROBE_THRESHOLD = 50


def probe_point(width: int, height: int) -> Tuple[int, int]:
    """(x, y) of the probe pixel: half the width, four fifths of the height."""
    return width // 2, (4 * height) // 5


def select_frame(image: Union[GrayImage, RgbImage], threshold: int = PROBE_THRESHOLD) -> bool:
    """True iff the 8-bit intensity at the probe point is strictly above ``threshold``."""
    gray = as_gray(image)
    x, y = probe_point(gray.width, gray.height)
    return int(gray.to_uint8()[y, x]) > threshold
