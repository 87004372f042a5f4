"""Built-in benchmark maps with hand-labeled promising regions.

Each builder returns a Sample whose region is a corridor of weight 1.0
around the known shortest route, which is where a good heuristic should
put its mass.  ``write_corpus`` saves the bundle files that the bench
command consumes: ``<name>.map.pgm``, ``<name>.query.ppm``, and
``<name>.gt.pgm``.

Run ``python -m region_rrt.corpus OUTDIR`` to materialize the files.
"""

from __future__ import annotations

import argparse
from collections.abc import Callable, Iterable
from pathlib import Path

import numpy as np

from .augment import Sample
from .grids import (
    GridMap,
    HeuristicMap,
    PlanningQuery,
    State,
    encode_query,
    save_grid_map,
    save_heuristic,
)

GOAL_RADIUS = 5.0
BAND_RADIUS = 5.0


def _band_region(grid: GridMap, waypoints: list[tuple[float, float]], radius: float = BAND_RADIUS) -> HeuristicMap:
    """Weight-1 band of the given radius around a waypoint polyline, free cells only."""
    cols, rows = np.meshgrid(np.arange(grid.width), np.arange(grid.height))
    px = cols + 0.5
    py = rows + 0.5
    dist = np.full((grid.height, grid.width), np.inf)
    for (ax, ay), (bx, by) in zip(waypoints[:-1], waypoints[1:]):
        vx, vy = bx - ax, by - ay
        norm2 = vx * vx + vy * vy
        if norm2 == 0.0:
            seg = np.hypot(px - ax, py - ay)
        else:
            t = np.clip(((px - ax) * vx + (py - ay) * vy) / norm2, 0.0, 1.0)
            seg = np.hypot(px - ax - t * vx, py - ay - t * vy)
        dist = np.minimum(dist, seg)
    weight = np.where((dist <= radius) & grid.free_mask, 1.0, 0.0)
    return HeuristicMap.from_weights(weight)


def _sample(occupancy: np.ndarray, start: tuple[int, int], goal: tuple[int, int],
            waypoints: list[tuple[float, float]]) -> Sample:
    grid = GridMap.from_occupancy(occupancy)
    query = PlanningQuery(
        start=State(float(start[0]), float(start[1])),
        goal=State(float(goal[0]), float(goal[1])),
        goal_radius=GOAL_RADIUS,
    )
    return Sample(grid=grid, region=_band_region(grid, waypoints), query=query)


def build_empty() -> Sample:
    """64x64 map with no obstacles; region hugs the diagonal."""
    occ = np.zeros((64, 64), dtype=bool)
    return _sample(occ, (8, 8), (56, 56), [(8.5, 8.5), (56.5, 56.5)])


def build_wall_gap() -> Sample:
    """Vertical wall with a centered gap; the route is a straight shot."""
    occ = np.zeros((96, 96), dtype=bool)
    occ[:, 46:50] = True
    occ[44:52, 46:50] = False
    return _sample(occ, (12, 48), (84, 48), [(12.5, 48.5), (84.5, 48.5)])


def build_wall_gap_offset() -> Sample:
    """Wall whose only gap sits far from the start-goal line, forcing a detour."""
    occ = np.zeros((96, 96), dtype=bool)
    occ[:, 46:50] = True
    occ[8:16, 46:50] = False
    return _sample(
        occ,
        (12, 80),
        (84, 80),
        [(12.5, 80.5), (42.0, 12.0), (54.0, 12.0), (84.5, 80.5)],
    )


def build_zigzag() -> Sample:
    """Two staggered walls; the route snakes bottom-then-top."""
    occ = np.zeros((96, 96), dtype=bool)
    occ[:, 30:34] = True
    occ[80:89, 30:34] = False
    occ[:, 62:66] = True
    occ[8:17, 62:66] = False
    return _sample(
        occ,
        (8, 48),
        (88, 48),
        [(8.5, 48.5), (32.0, 84.0), (64.0, 12.0), (88.5, 48.5)],
    )


def build_rooms() -> Sample:
    """Four rooms joined by two doors; the route crosses two of them."""
    occ = np.zeros((96, 96), dtype=bool)
    occ[46:50, :] = True
    occ[:, 46:50] = True
    occ[20:28, 46:50] = False
    occ[46:50, 68:76] = False
    return _sample(
        occ,
        (12, 12),
        (84, 84),
        [(12.5, 12.5), (48.0, 24.0), (72.0, 30.0), (72.0, 60.0), (84.5, 84.5)],
    )


def build_l_turn() -> Sample:
    """L-shaped corridor route with a T-shaped dead-end trap branching off it."""
    occ = np.ones((96, 96), dtype=bool)
    occ[72:88, 8:88] = False
    occ[8:88, 72:88] = False
    occ[16:72, 24:40] = False
    occ[24:40, 40:64] = False
    return _sample(occ, (16, 80), (80, 16), [(16.5, 80.5), (80.0, 80.0), (80.5, 16.5)])


BUILDERS: dict[str, Callable[[], Sample]] = {
    "empty": build_empty,
    "wall_gap": build_wall_gap,
    "wall_gap_offset": build_wall_gap_offset,
    "zigzag": build_zigzag,
    "rooms": build_rooms,
    "l_turn": build_l_turn,
}

# Maps where a concentrated region should beat uniform sampling clearly.
BENEFIT_NAMES = ("wall_gap", "wall_gap_offset", "zigzag", "rooms", "l_turn")


def build(name: str) -> Sample:
    """Build one named benchmark sample."""
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown map {name!r}; known: {', '.join(sorted(BUILDERS))}") from None
    return builder()


def write_corpus(directory: str | Path, names: Iterable[str] | None = None) -> list[Path]:
    """Write map/query/region bundles for the named builders (default: all)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name in names if names is not None else BUILDERS:
        sample = build(name)
        for suffix, data in (
            (".map.pgm", save_grid_map(sample.grid)),
            (".query.ppm", encode_query(sample.grid, sample.query)),
            (".gt.pgm", save_heuristic(sample.region)),
        ):
            path = directory / f"{name}{suffix}"
            path.write_bytes(data)
            written.append(path)
    return written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m region_rrt.corpus",
        description="Write the built-in benchmark map bundles.",
    )
    parser.add_argument("outdir", help="directory to write bundles into")
    parser.add_argument(
        "--names",
        nargs="+",
        choices=sorted(BUILDERS),
        default=None,
        help="subset of maps to write (default: all)",
    )
    args = parser.parse_args(argv)
    written = write_corpus(args.outdir, args.names)
    print(f"wrote {len(written)} files to {args.outdir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
