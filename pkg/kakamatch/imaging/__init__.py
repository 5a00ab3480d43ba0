"""Image containers, PNM codec and filtering primitives."""

from kakamatch.imaging.image import GrayImage, RgbImage, SoftMask, as_gray, crop, to_gray
from kakamatch.imaging.pnm import decode_pnm, encode_pnm, read_pnm, write_pnm
from kakamatch.imaging.filters import downsample_half, gaussian_blur, mean_blur
from kakamatch.imaging.draw import render_matches, side_by_side

__all__ = [
    'GrayImage',
    'RgbImage',
    'SoftMask',
    'as_gray',
    'crop',
    'to_gray',
    'decode_pnm',
    'encode_pnm',
    'read_pnm',
    'write_pnm',
    'downsample_half',
    'gaussian_blur',
    'mean_blur',
    'render_matches',
    'side_by_side',
]
