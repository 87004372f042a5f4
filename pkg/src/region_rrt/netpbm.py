"""Binary netpbm (P5/P6) codec.

This is the byte-level interchange format for every raster the toolkit
reads or writes: grayscale P5 for occupancy grids and heuristic maps,
RGB P6 for query images and overlays.  Only the binary variants with
maxval 255 are supported; writers emit exactly one whitespace byte after
each header token so output is reproducible byte for byte.
"""

from __future__ import annotations

import numpy as np

from .errors import FormatError

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    """Advance past whitespace runs and '#' comment lines."""
    n = len(data)
    while pos < n:
        if data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\n\r":
                pos += 1
        elif data[pos] in _WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_token(data: bytes, pos: int, field: str) -> tuple[bytes, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise FormatError(f"truncated header: missing {field}")
    return data[start:pos], pos


def _read_int(data: bytes, pos: int, field: str) -> tuple[int, int]:
    token, pos = _read_token(data, pos, field)
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"{field}: expected integer, got {token!r}") from None
    if value <= 0:
        raise FormatError(f"{field}: must be positive, got {value}")
    return value, pos


def _read_header(data: bytes, magic: bytes) -> tuple[int, int, int]:
    """Parse a P5/P6 header; return (width, height, raster offset)."""
    token, pos = _read_token(data, 0, "magic")
    if token != magic:
        raise FormatError(
            f"magic: expected {magic.decode()}, got {token[:8]!r}"
        )
    width, pos = _read_int(data, pos, "width")
    height, pos = _read_int(data, pos, "height")
    maxval, pos = _read_int(data, pos, "maxval")
    if maxval != 255:
        raise FormatError(f"maxval: expected 255, got {maxval}")
    # Exactly one whitespace byte separates the header from the raster.
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError("truncated header: missing raster separator")
    return width, height, pos + 1


def read_pgm(data: bytes) -> np.ndarray:
    """Decode P5 bytes into a (height, width) uint8 array."""
    width, height, offset = _read_header(data, b"P5")
    raster = data[offset : offset + width * height]
    if len(raster) < width * height:
        raise FormatError(
            f"pixel data: expected {width * height} bytes, got {len(raster)}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(pixels: np.ndarray) -> bytes:
    """Encode a (height, width) uint8 array as P5 bytes."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    if pixels.ndim != 2:
        raise ValueError(f"expected 2-D grayscale array, got shape {pixels.shape}")
    height, width = pixels.shape
    return b"P5\n%d %d\n255\n" % (width, height) + pixels.tobytes()


def read_ppm(data: bytes) -> np.ndarray:
    """Decode P6 bytes into a (height, width, 3) uint8 array."""
    width, height, offset = _read_header(data, b"P6")
    raster = data[offset : offset + width * height * 3]
    if len(raster) < width * height * 3:
        raise FormatError(
            f"pixel data: expected {width * height * 3} bytes, got {len(raster)}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()


def write_ppm(pixels: np.ndarray) -> bytes:
    """Encode a (height, width, 3) uint8 array as P6 bytes."""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB array, got shape {pixels.shape}")
    height, width = pixels.shape[:2]
    return b"P6\n%d %d\n255\n" % (width, height) + pixels.tobytes()
