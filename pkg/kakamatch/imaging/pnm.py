"""Binary PGM (P5) / PPM (P6) codec, maxval 255 only."""

from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from kakamatch.imaging.image import GrayImage, RgbImage, SoftMask, quantize
from kakamatch.utils.exceptions import ImageDecodeError

_WHITESPACE = b" \t\n\r\x0b\x0c"
_CHANNELS = {b"P5": 1, b"P6": 3}


def _read_header(buf: bytes) -> Tuple[bytes, List[int], int]:
    """
    Parse magic, width, height and maxval.

    Returns:
        Tuple of (magic, [width, height, maxval], body offset)
    """
    magic = buf[:2]
    if magic not in _CHANNELS:
        raise ImageDecodeError(f"Unsupported magic {magic!r}, expected P5 or P6", 0)

    pos = 2
    values: List[int] = []
    while len(values) < 3:
        # Whitespace and comments may precede every header token
        while pos < len(buf) and (buf[pos] in _WHITESPACE or buf[pos] == ord("#")):
            if buf[pos] == ord("#"):
                end = buf.find(b"\n", pos)
                if end < 0:
                    raise ImageDecodeError("Unterminated header comment", pos)
                pos = end
            pos += 1
        start = pos
        while pos < len(buf) and buf[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise ImageDecodeError("Expected a decimal header field", start)
        values.append(int(buf[start:pos]))

    # Exactly one whitespace byte separates maxval from the raster
    if pos >= len(buf) or buf[pos] not in _WHITESPACE:
        raise ImageDecodeError("Missing whitespace after maxval", pos)
    return magic, values, pos + 1


def decode_pnm(data: bytes) -> Union[GrayImage, RgbImage]:
    """
    Decode a binary PGM/PPM byte sequence.

    Args:
        data: Raw file contents

    Returns:
        GrayImage (P5, values sample/255) or RgbImage (P6)

    Raises:
        ImageDecodeError: On malformed header, truncated body or maxval != 255
    """
    buf = bytes(data)
    magic, (width, height, maxval), offset = _read_header(buf)
    if width < 1 or height < 1:
        raise ImageDecodeError(f"Invalid dimensions {width}x{height}", 2)
    if maxval != 255:
        raise ImageDecodeError(f"Unsupported maxval {maxval}, only 255 is accepted", offset - 1)

    channels = _CHANNELS[magic]
    expected = width * height * channels
    body = buf[offset:offset + expected]
    if len(body) < expected:
        raise ImageDecodeError(
            f"Truncated body: expected {expected} bytes, found {len(body)}", offset + len(body)
        )

    samples = np.frombuffer(body, dtype=np.uint8)
    if channels == 1:
        return GrayImage.from_uint8(samples.reshape(height, width))
    return RgbImage(samples.reshape(height, width, 3))


def encode_pnm(image: Union[GrayImage, RgbImage, SoftMask]) -> bytes:
    """
    Encode a raster as binary PNM.

    GrayImage and SoftMask become P5 with sample = round(value * 255),
    rounding half up; RgbImage becomes P6.
    """
    if isinstance(image, RgbImage):
        magic, body = b"P6", image.data.tobytes()
    else:
        magic, body = b"P5", quantize(image.data).tobytes()
    header = b"%s\n%d %d\n255\n" % (magic, image.width, image.height)
    return header + body


def read_pnm(path: Path) -> Union[GrayImage, RgbImage]:
    """Read and decode a PNM file."""
    with open(path, "rb") as f:
        return decode_pnm(f.read())


def write_pnm(path: Path, image: Union[GrayImage, RgbImage, SoftMask]) -> Path:
    """Encode and write a PNM file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        f.write(encode_pnm(image))
    return path
