"""Export generator outputs as the planner's heuristic byte format.

The planner consumes 8-bit P5 rasters whose gray levels scale weights by
255; the promising region lives in the generator's green channel.  Writing
the bytes here keeps the two packages coupled only through the file format.
"""

import numpy as np


def write_p5(pixels: np.ndarray) -> bytes:
    """Serialize a uint8 (h, w) raster as binary PGM with maxval 255."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2 or pixels.dtype != np.uint8:
        raise ValueError(
            f"need a uint8 (h, w) raster, got {pixels.dtype} {pixels.shape}")
    h, w = pixels.shape
    return b"P5\n%d %d\n255\n" % (w, h) + pixels.tobytes()


def quantize(values: np.ndarray) -> np.ndarray:
    """[0, 1] floats to uint8 levels, rounding half up."""
    values = np.asarray(values, dtype=np.float64)
    if values.size and (values.min() < 0.0 or values.max() > 1.0):
        raise ValueError("values must lie in [0, 1]")
    return np.floor(values * 255.0 + 0.5).astype(np.uint8)


def export_heuristic(region: np.ndarray) -> bytes:
    """P5 bytes for a (3, h, w) generator output's green channel."""
    region = np.asarray(region, dtype=np.float64)
    if region.ndim != 3 or region.shape[0] != 3:
        raise ValueError(f"need a (3, h, w) region, got shape {region.shape}")
    return write_p5(quantize(region[1]))


def export_map(occupancy: np.ndarray) -> bytes:
    """P5 bytes for a boolean occupancy grid: obstacles 0, free cells 255."""
    occupancy = np.asarray(occupancy, dtype=bool)
    if occupancy.ndim != 2:
        raise ValueError(f"need a (h, w) grid, got shape {occupancy.shape}")
    return write_p5(np.where(occupancy, 0, 255).astype(np.uint8))
