"""Occupancy grids, planning queries, heuristic maps, and their file formats.

Conventions used throughout the toolkit:

* x = column, y = row, origin at the top-left corner.
* Cell (i, j) covers the half-open square [i, i+1) x [j, j+1), so a state
  (x, y) lies in cell (floor(x), floor(y)).
* Grayscale P5 encodes occupancy (gray < 128 means obstacle) and heuristic
  weights (gray / 255).  RGB P6 encodes query images (pure red start dot,
  pure blue goal dot) and overlays.

All types are immutable after construction and safe to share across
concurrent planner runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateHeuristicError,
    DimensionMismatchError,
    FormatError,
    InfeasibleQueryError,
    QueryError,
)
from .netpbm import read_pgm, read_ppm, write_pgm, write_ppm

OBSTACLE_THRESHOLD = 128  # gray values below this are obstacles

RED = (255, 0, 0)
BLUE = (0, 0, 255)
GREEN = (0, 255, 0)


@dataclass(frozen=True)
class GridMap:
    """2-D occupancy grid; ``occupancy[row, col]`` is True on obstacle cells."""

    width: int
    height: int
    occupancy: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"grid dimensions must be positive, got {self.width}x{self.height}")
        occ = np.ascontiguousarray(np.asarray(self.occupancy, dtype=bool))
        if occ.shape != (self.height, self.width):
            raise ValueError(
                f"occupancy shape {occ.shape} does not match {self.height}x{self.width}"
            )
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    @classmethod
    def from_occupancy(cls, occupancy: np.ndarray) -> "GridMap":
        occupancy = np.asarray(occupancy, dtype=bool)
        height, width = occupancy.shape
        return cls(width=width, height=height, occupancy=occupancy)

    @classmethod
    def empty(cls, width: int, height: int) -> "GridMap":
        """All-free map."""
        return cls(width=width, height=height, occupancy=np.zeros((height, width), dtype=bool))

    @property
    def free_mask(self) -> np.ndarray:
        return ~self.occupancy

    @property
    def n_free(self) -> int:
        return int(self.free_mask.sum())

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width and 0.0 <= y < self.height

    def is_free(self, x: float, y: float) -> bool:
        """True when (x, y) is inside the map and its cell is not an obstacle."""
        if not self.in_bounds(x, y):
            return False
        return not self.occupancy[int(y), int(x)]


@dataclass(frozen=True)
class State:
    """Continuous planar state in map coordinates."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"state coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "State") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class PlanningQuery:
    """Start and goal states plus the goal-region radius."""

    start: State
    goal: State
    goal_radius: float

    def __post_init__(self) -> None:
        if not self.goal_radius > 0:
            raise ValueError(f"goal_radius must be positive, got {self.goal_radius}")


@dataclass(frozen=True)
class HeuristicMap:
    """Per-cell promising-region weights in [0, 1]."""

    width: int
    height: int
    weight: np.ndarray

    def __post_init__(self) -> None:
        w = np.ascontiguousarray(np.asarray(self.weight, dtype=np.float64))
        if w.shape != (self.height, self.width):
            raise ValueError(
                f"weight shape {w.shape} does not match {self.height}x{self.width}"
            )
        if not np.all(np.isfinite(w)) or w.min(initial=0.0) < 0.0 or w.max(initial=0.0) > 1.0:
            raise ValueError("heuristic weights must lie in [0, 1]")
        w.setflags(write=False)
        object.__setattr__(self, "weight", w)

    @classmethod
    def from_weights(cls, weight: np.ndarray) -> "HeuristicMap":
        weight = np.asarray(weight, dtype=np.float64)
        height, width = weight.shape
        return cls(width=width, height=height, weight=weight)


def load_grid_map(data: bytes) -> GridMap:
    """Decode a P5 grayscale image into an occupancy grid.

    A cell is an obstacle iff its gray value is below 128: white (255) is
    free space, black (0) is obstacle.
    """
    pixels = read_pgm(data)
    height, width = pixels.shape
    if width < 2 or height < 2:
        raise FormatError(f"width/height: map must be at least 2x2 cells, got {width}x{height}")
    return GridMap(width=width, height=height, occupancy=pixels < OBSTACLE_THRESHOLD)


def save_grid_map(grid: GridMap) -> bytes:
    """Encode occupancy as P5 bytes (free = 255, obstacle = 0)."""
    pixels = np.where(grid.occupancy, 0, 255).astype(np.uint8)
    return write_pgm(pixels)


def _centroid(mask: np.ndarray) -> tuple[float, float]:
    rows, cols = np.nonzero(mask)
    return float(cols.mean()), float(rows.mean())


def decode_query(
    image: np.ndarray,
    grid: GridMap,
    goal_radius: float,
    color_tolerance: int = 0,
) -> PlanningQuery:
    """Extract start/goal states from the red/blue dots of a query image.

    Each colored cluster is treated as one dot: the start is the centroid of
    all pure-red pixels, the goal the centroid of all pure-blue pixels.
    ``color_tolerance`` relaxes the exact (255,0,0)/(0,0,255) match by the
    given per-channel amount.
    """
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise QueryError(f"query image must be RGB, got shape {image.shape}")
    if image.shape[0] != grid.height or image.shape[1] != grid.width:
        raise DimensionMismatchError(
            f"query image is {image.shape[1]}x{image.shape[0]}, "
            f"map is {grid.width}x{grid.height}"
        )
    tol = int(color_tolerance)
    r, g, b = image[:, :, 0], image[:, :, 1], image[:, :, 2]
    red_mask = (r >= 255 - tol) & (g <= tol) & (b <= tol)
    blue_mask = (b >= 255 - tol) & (r <= tol) & (g <= tol)
    if not red_mask.any():
        raise QueryError("query image contains no red start pixels")
    if not blue_mask.any():
        raise QueryError("query image contains no blue goal pixels")
    start = State(*_centroid(red_mask))
    goal = State(*_centroid(blue_mask))
    for name, state in (("start", start), ("goal", goal)):
        if not grid.is_free(state.x, state.y):
            raise InfeasibleQueryError(
                f"{name} centroid ({state.x:.2f}, {state.y:.2f}) lies in an obstacle cell"
            )
    return PlanningQuery(start=start, goal=goal, goal_radius=goal_radius)


def _paint_disc(image: np.ndarray, cx: int, cy: int, radius: int, color: tuple[int, int, int]) -> None:
    height, width = image.shape[:2]
    r2 = radius * radius
    for row in range(max(0, cy - radius), min(height, cy + radius + 1)):
        for col in range(max(0, cx - radius), min(width, cx + radius + 1)):
            if (col - cx) ** 2 + (row - cy) ** 2 <= r2:
                image[row, col] = color


def encode_query(grid: GridMap, query: PlanningQuery, dot_radius: int = 2) -> bytes:
    """Render a query image: map background plus red start and blue goal dots.

    Dots are symmetric discs centered on the start/goal cells, so
    ``decode_query`` recovers the cell centers exactly as long as the discs
    are not clipped at the map border.
    """
    base = np.where(grid.occupancy, 0, 255).astype(np.uint8)
    image = np.repeat(base[:, :, None], 3, axis=2)
    _paint_disc(image, int(query.goal.x), int(query.goal.y), dot_radius, BLUE)
    _paint_disc(image, int(query.start.x), int(query.start.y), dot_radius, RED)
    return write_ppm(image)


def load_heuristic(data: bytes, grid: GridMap) -> HeuristicMap:
    """Decode P5 bytes into weights gray/255, masked to the map's free space.

    Weights on obstacle cells are forced to zero.  A heuristic whose masked
    weights are all zero is rejected: it cannot guide sampling and silently
    falling back to uniform would hide an upstream failure.
    """
    pixels = read_pgm(data)
    if pixels.shape != (grid.height, grid.width):
        raise DimensionMismatchError(
            f"heuristic is {pixels.shape[1]}x{pixels.shape[0]}, "
            f"map is {grid.width}x{grid.height}"
        )
    weight = pixels.astype(np.float64) / 255.0
    weight[grid.occupancy] = 0.0
    if not (weight > 0.0).any():
        raise DegenerateHeuristicError("heuristic has zero weight on every free cell")
    return HeuristicMap(width=grid.width, height=grid.height, weight=weight)


def read_weights(data: bytes) -> HeuristicMap:
    """Decode P5 bytes into raw weights gray/255 with no map masking.

    Used for scoring predicted regions against ground truth, where no
    occupancy grid is involved and an all-zero prediction is legitimate.
    """
    pixels = read_pgm(data)
    return HeuristicMap.from_weights(pixels.astype(np.float64) / 255.0)


def save_heuristic(heuristic: HeuristicMap) -> bytes:
    """Encode weights as P5 bytes with gray = round(weight * 255), half up."""
    gray = np.floor(heuristic.weight * 255.0 + 0.5)
    return write_pgm(np.clip(gray, 0, 255).astype(np.uint8))


def save_overlay(grid: GridMap, heuristic: HeuristicMap, query: PlanningQuery,
                 dot_radius: int = 2) -> bytes:
    """Render map + promising region + query dots as P6 bytes.

    Free cells are white, obstacles black, cells with weight above 0.5 green;
    the start dot (red) is painted last so its center cell is always red.
    """
    if (heuristic.width, heuristic.height) != (grid.width, grid.height):
        raise DimensionMismatchError(
            f"heuristic is {heuristic.width}x{heuristic.height}, "
            f"map is {grid.width}x{grid.height}"
        )
    base = np.where(grid.occupancy, 0, 255).astype(np.uint8)
    image = np.repeat(base[:, :, None], 3, axis=2)
    image[heuristic.weight > 0.5] = GREEN
    _paint_disc(image, int(query.goal.x), int(query.goal.y), dot_radius, BLUE)
    _paint_disc(image, int(query.start.x), int(query.start.y), dot_radius, RED)
    return write_ppm(image)
