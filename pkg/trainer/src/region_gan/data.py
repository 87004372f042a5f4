"""Synthetic wall-and-gap training samples for tests and smoke runs.

Each scene is a planning problem rendered the way the dataset images are:
a grayscale occupancy raster (white free, black walls), a query raster with
a red start dot and a blue goal dot on white, and a target raster whose
green channel carries the promising region, a band along the route through
the gap.
"""

from dataclasses import dataclass

import numpy as np
import torch


@dataclass(frozen=True)
class Scene:
    """One rendered planning problem; rasters are channel-first floats."""

    occupancy: np.ndarray
    start: tuple[int, int]
    goal: tuple[int, int]
    map_raster: np.ndarray
    point_raster: np.ndarray
    target: np.ndarray


def _dot(image: np.ndarray, row: int, col: int,
         color: tuple[float, float, float], radius: int = 2) -> None:
    h, w = image.shape[1:]
    for r in range(max(0, row - radius), min(h, row + radius + 1)):
        for c in range(max(0, col - radius), min(w, col + radius + 1)):
            if (r - row) ** 2 + (c - col) ** 2 <= radius ** 2:
                image[:, r, c] = color


def make_scene(size: int, rng: np.random.Generator) -> Scene:
    """Random wall with a gap, start left of it, goal right of it."""
    if size < 16:
        raise ValueError(f"scenes need size >= 16, got {size}")
    occ = np.zeros((size, size), dtype=bool)
    wall = int(rng.integers(size // 3, min(2 * size // 3, size - 7) + 1))
    gap_len = size // 4
    gap = int(rng.integers(2, size - gap_len - 2))
    occ[:, wall:wall + 3] = True
    occ[gap:gap + gap_len, wall:wall + 3] = False

    start = (int(rng.integers(2, size - 2)), int(rng.integers(2, wall - 2)))
    goal = (int(rng.integers(2, size - 2)), int(rng.integers(wall + 4, size - 2)))

    grid = np.where(occ, 0.0, 1.0)
    map_raster = np.repeat(grid[None], 3, axis=0)

    points = np.ones((3, size, size))
    _dot(points, start[0], start[1], (1.0, 0.0, 0.0))
    _dot(points, goal[0], goal[1], (0.0, 0.0, 1.0))

    # region: a band around the two-leg route start -> gap center -> goal
    mid = (gap + gap_len // 2, wall + 1)
    rows, cols = np.mgrid[0:size, 0:size]
    px, py = cols + 0.5, rows + 0.5
    band = np.zeros((size, size))
    for a, b in ((start, mid), (mid, goal)):
        ax, ay = a[1] + 0.5, a[0] + 0.5
        bx, by = b[1] + 0.5, b[0] + 0.5
        dx, dy = bx - ax, by - ay
        t = np.clip(((px - ax) * dx + (py - ay) * dy)
                    / max(dx * dx + dy * dy, 1e-12), 0.0, 1.0)
        dist = np.hypot(px - (ax + t * dx), py - (ay + t * dy))
        band = np.maximum(band, (dist <= size / 12).astype(float))
    band[occ] = 0.0
    target = np.zeros((3, size, size))
    target[1] = band
    return Scene(occ, start, goal, map_raster, points, target)


def _stack(arrays: list[np.ndarray]) -> torch.Tensor:
    return torch.as_tensor(np.stack(arrays), dtype=torch.float32)


def synthetic_batch(n: int, size: int, seed: int = 0
                    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Batch tensors (maps, points, noise, targets), all float32 in [0, 1]."""
    rng = np.random.default_rng(seed)
    scenes = [make_scene(size, rng) for _ in range(n)]
    noise = torch.as_tensor(rng.random((n, 1, size, size)), dtype=torch.float32)
    return (_stack([s.map_raster for s in scenes]),
            _stack([s.point_raster for s in scenes]),
            noise,
            _stack([s.target for s in scenes]))
