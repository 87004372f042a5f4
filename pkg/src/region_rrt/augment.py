"""Paired (map, region, query) augmentation for growing small corpora.

Geometric transforms (integer shifts, quarter-turn rotations) move the
occupancy grid, the region weights, and the query start/goal jointly.
Photometric jitter (shear skew, brightness) touches the region channel
only; the boolean occupancy that planning runs on is never interpolated
or re-thresholded.  Transformed queries that land in an obstacle are
rejected and redrawn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AugmentationError, InfeasibleQueryError
from .grids import GridMap, HeuristicMap, PlanningQuery, State


@dataclass(frozen=True)
class AugmentParams:
    """Augmentation knobs; defaults follow the standard recipe for this dataset
    (shifts up to 2 cells in steps of 1, half the samples rotated, 10 outputs).
    Shear and brightness jitter default to off."""

    height_shift: int = 2
    width_shift: int = 2
    shift_step: int = 1
    rotation_probability: float = 0.5
    maps_to_generate: int = 10
    shear_degrees: tuple[float, float] = (0.0, 0.0)
    brightness_range: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self) -> None:
        if self.height_shift < 0 or self.width_shift < 0 or self.shift_step < 0:
            raise ValueError("shift extents and step must be nonnegative")
        if not 0.0 <= self.rotation_probability <= 1.0:
            raise ValueError(
                f"rotation_probability must lie in [0, 1], got {self.rotation_probability}"
            )
        if self.maps_to_generate < 0:
            raise ValueError("maps_to_generate must be nonnegative")
        if self.shear_degrees[0] > self.shear_degrees[1]:
            raise ValueError("shear_degrees must be a (low, high) range")
        if self.brightness_range[0] > self.brightness_range[1]:
            raise ValueError("brightness_range must be a (low, high) range")


@dataclass(frozen=True)
class Sample:
    """A map with its promising region and a feasible query."""

    grid: GridMap
    region: HeuristicMap
    query: PlanningQuery

    def __post_init__(self) -> None:
        if (self.region.width, self.region.height) != (self.grid.width, self.grid.height):
            raise ValueError(
                f"region is {self.region.width}x{self.region.height}, "
                f"map is {self.grid.width}x{self.grid.height}"
            )
        for name, s in (("start", self.query.start), ("goal", self.query.goal)):
            if not self.grid.is_free(s.x, s.y):
                raise InfeasibleQueryError(
                    f"{name} ({s.x}, {s.y}) is outside the map or in an obstacle cell"
                )


def rescale_pixels(image: np.ndarray) -> np.ndarray:
    """Rescale 8-bit pixel values into [0, 1] with factor 1/255."""
    return np.asarray(image, dtype=np.float64) / 255.0


def _shift_array(arr: np.ndarray, dx: int, dy: int, fill) -> np.ndarray:
    """Translate; content shifted out of frame is dropped, vacated cells filled."""
    out = np.full_like(arr, fill)
    h, w = arr.shape
    span_x, span_y = w - abs(dx), h - abs(dy)
    if span_x <= 0 or span_y <= 0:
        return out
    src_x, dst_x = (0, dx) if dx >= 0 else (-dx, 0)
    src_y, dst_y = (0, dy) if dy >= 0 else (-dy, 0)
    out[dst_y : dst_y + span_y, dst_x : dst_x + span_x] = arr[
        src_y : src_y + span_y, src_x : src_x + span_x
    ]
    return out


def _rotate_state_quarter(x: float, y: float, width: int) -> tuple[float, float]:
    # Cell indices rotate exactly; in-cell offsets rotate with a mod-1 seam so
    # states stay inside the image of their original half-open cell.
    c, r = int(x), int(y)
    fx, fy = x - c, y - r
    return (r + fy, (width - 1 - c) + ((1.0 - fx) % 1.0))


def shift_sample(sample: Sample, dx: int, dy: int) -> Sample:
    """Shift map, region, and query jointly by integer cell offsets."""
    grid = GridMap.from_occupancy(_shift_array(sample.grid.occupancy, dx, dy, False))
    region = HeuristicMap.from_weights(_shift_array(sample.region.weight, dx, dy, 0.0))
    q = sample.query
    query = PlanningQuery(
        start=State(q.start.x + dx, q.start.y + dy),
        goal=State(q.goal.x + dx, q.goal.y + dy),
        goal_radius=q.goal_radius,
    )
    return Sample(grid=grid, region=region, query=query)


def rotate_sample(sample: Sample, quarter_turns: int) -> Sample:
    """Rotate everything by quarter_turns * 90 degrees (counterclockwise in
    array orientation, matching ``np.rot90``)."""
    k = quarter_turns % 4
    occ = np.rot90(sample.grid.occupancy, k)
    weight = np.rot90(sample.region.weight, k)
    width, height = sample.grid.width, sample.grid.height
    sx, sy = sample.query.start.x, sample.query.start.y
    gx, gy = sample.query.goal.x, sample.query.goal.y
    for _ in range(k):
        sx, sy = _rotate_state_quarter(sx, sy, width)
        gx, gy = _rotate_state_quarter(gx, gy, width)
        width, height = height, width
    query = PlanningQuery(
        start=State(sx, sy), goal=State(gx, gy), goal_radius=sample.query.goal_radius
    )
    return Sample(
        grid=GridMap.from_occupancy(occ),
        region=HeuristicMap.from_weights(weight),
        query=query,
    )


def shear_region(sample: Sample, degrees: float) -> Sample:
    """Skew the region channel horizontally by integer per-row offsets.

    Counterclockwise shear angle in degrees about the vertical center.
    Occupancy and query are untouched; region mass pushed out of frame is
    dropped.
    """
    slope = math.tan(math.radians(degrees))
    center = (sample.grid.height - 1) / 2.0
    weight = np.zeros_like(sample.region.weight)
    w = sample.grid.width
    for row in range(sample.grid.height):
        dx = round(slope * (row - center))
        lo, hi = max(0, dx), min(w, w + dx)
        if lo < hi:
            weight[row, lo:hi] = sample.region.weight[row, lo - dx : hi - dx]
    return Sample(
        grid=sample.grid,
        region=HeuristicMap.from_weights(weight),
        query=sample.query,
    )


def brighten_region(sample: Sample, factor: float) -> Sample:
    """Scale region weights by a brightness factor, clipped back into [0, 1]."""
    weight = np.clip(sample.region.weight * factor, 0.0, 1.0)
    return Sample(
        grid=sample.grid,
        region=HeuristicMap.from_weights(weight),
        query=sample.query,
    )


@dataclass(frozen=True)
class Transform:
    """One drawn augmentation: joint shift and rotation, region-only jitter."""

    dx: int
    dy: int
    quarter_turns: int
    shear: float
    brightness: float

    def apply(self, sample: Sample) -> Sample:
        out = shift_sample(sample, self.dx, self.dy)
        if self.quarter_turns % 4:
            out = rotate_sample(out, self.quarter_turns)
        if self.shear != 0.0:
            out = shear_region(out, self.shear)
        if self.brightness != 1.0:
            out = brighten_region(out, self.brightness)
        return out

    def describe(self) -> str:
        return (
            f"shift({self.dx:+d},{self.dy:+d});rot90x{self.quarter_turns};"
            f"shear({self.shear:g});brightness({self.brightness:g})"
        )


def draw_transform(params: AugmentParams, rng: np.random.Generator, square: bool) -> Transform:
    """Draw one transform; quarter turns on non-square maps are limited to
    0/180 so output dimensions always match the input."""
    kx = params.width_shift // params.shift_step if params.shift_step > 0 else 0
    ky = params.height_shift // params.shift_step if params.shift_step > 0 else 0
    dx = int(rng.integers(-kx, kx + 1)) * params.shift_step if kx > 0 else 0
    dy = int(rng.integers(-ky, ky + 1)) * params.shift_step if ky > 0 else 0
    quarter_turns = 0
    if params.rotation_probability > 0 and rng.random() < params.rotation_probability:
        choices = (0, 1, 2, 3) if square else (0, 2)
        quarter_turns = choices[int(rng.integers(0, len(choices)))]
    shear = 0.0
    if params.shear_degrees != (0.0, 0.0):
        shear = float(rng.uniform(params.shear_degrees[0], params.shear_degrees[1]))
    brightness = 1.0
    if params.brightness_range != (1.0, 1.0):
        brightness = float(rng.uniform(params.brightness_range[0], params.brightness_range[1]))
    return Transform(dx=dx, dy=dy, quarter_turns=quarter_turns, shear=shear, brightness=brightness)


def augment_sample_detailed(
    sample: Sample, params: AugmentParams, rng: np.random.Generator
) -> list[tuple[Sample, Transform]]:
    """Produce maps_to_generate augmented samples with their transforms.

    Each output slot redraws until the transformed query stays feasible;
    100 consecutive rejections abort the run.
    """
    square = sample.grid.width == sample.grid.height
    outputs: list[tuple[Sample, Transform]] = []
    for slot in range(params.maps_to_generate):
        for _ in range(100):
            transform = draw_transform(params, rng, square)
            try:
                outputs.append((transform.apply(sample), transform))
            except InfeasibleQueryError:
                continue
            break
        else:
            raise AugmentationError(
                f"no feasible transform found for output {slot} after 100 attempts"
            )
    return outputs


def augment_sample(
    sample: Sample, params: AugmentParams, rng: np.random.Generator
) -> list[Sample]:
    """As augment_sample_detailed, returning only the samples."""
    return [s for s, _ in augment_sample_detailed(sample, params, rng)]
