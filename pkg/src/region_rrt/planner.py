"""RRT planning loop: sample, find nearest vertex, steer, collision-check.

The tree is grown one vertex per successful iteration; planning succeeds as
soon as a newly added vertex is inside the goal ball and can be connected
to the exact goal without collision, giving reproducible path endpoints.
The start vertex itself is checked at initialization, so a query whose goal
ball already contains the start yields the two-state path [start, goal].
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .errors import DimensionMismatchError, InfeasibleQueryError
from .grids import GridMap, PlanningQuery, State
from .sampling import SamplingDistribution, make_rng, sample_state, uniform_distribution


@dataclass(frozen=True)
class Tree:
    """Search tree: vertices in insertion order, parents[i] < i, parents[0] = 0."""

    vertices: np.ndarray
    parents: np.ndarray

    def __post_init__(self) -> None:
        vertices = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        parents = np.ascontiguousarray(np.asarray(self.parents, dtype=np.int64))
        if vertices.ndim != 2 or vertices.shape[1] != 2:
            raise ValueError(f"vertices must be (n, 2), got {vertices.shape}")
        if parents.shape != (vertices.shape[0],):
            raise ValueError("parents must have one entry per vertex")
        vertices.setflags(write=False)
        parents.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "parents", parents)

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def state(self, index: int) -> State:
        x, y = self.vertices[index]
        return State(float(x), float(y))


@dataclass(frozen=True)
class PlanResult:
    """Outcome of one planning run; ``path`` is empty when no path was found."""

    tree: Tree
    path: tuple[State, ...]
    node_count: int
    iterations_used: int
    time_cost: float
    path_cost: float

    @property
    def success(self) -> bool:
        return len(self.path) > 0


def nearest(tree: Tree, q: State) -> int:
    """Index of the tree vertex closest to q; ties go to the smallest index."""
    if len(tree) == 0:
        raise ValueError("nearest requires a nonempty tree")
    dx = tree.vertices[:, 0] - q.x
    dy = tree.vertices[:, 1] - q.y
    return int(np.argmin(dx * dx + dy * dy))


def steer(x_near: State, x_rand: State, step_length: float) -> State:
    """Move from x_near toward x_rand by at most step_length."""
    if not step_length > 0:
        raise ValueError(f"step_length must be positive, got {step_length}")
    d = x_near.distance_to(x_rand)
    if d <= step_length:
        return x_rand
    t = step_length / d
    return State(x_near.x + t * (x_rand.x - x_near.x), x_near.y + t * (x_rand.y - x_near.y))


def collision_free(a: State, b: State, grid: GridMap, resolution: float) -> bool:
    """True iff every point sampled along ab at spacing <= resolution is free.

    Both endpoints are always included.  This is a sampled check: an obstacle
    sliver thinner than the resolution between consecutive samples can be
    missed, which Table-scale defaults make rare (see the supersampling
    oracle in the test suite).
    """
    if not resolution > 0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    for name, s in (("a", a), ("b", b)):
        if not grid.in_bounds(s.x, s.y):
            raise ValueError(f"segment endpoint {name} ({s.x}, {s.y}) is outside the map")
    d = a.distance_to(b)
    n_seg = max(1, math.ceil(d / resolution))
    ts = np.linspace(0.0, 1.0, n_seg + 1)
    cols = (a.x + ts * (b.x - a.x)).astype(np.int64)
    rows = (a.y + ts * (b.y - a.y)).astype(np.int64)
    return not grid.occupancy[rows, cols].any()


def path_cost(path: Sequence[State]) -> float:
    """Sum of consecutive Euclidean segment lengths; 0 for a single state."""
    if len(path) == 0:
        raise ValueError("path_cost requires at least one state")
    return math.fsum(
        path[i].distance_to(path[i + 1]) for i in range(len(path) - 1)
    )


class RRTPlanner(BaseEstimator):
    """RRT planner with spec'd defaults for 256-cell maps.

    Parameters
    ----------
    step_length : float, default=10.0
        Maximum extension per iteration, in cells.
    max_iterations : int, default=5000
        Sampling budget before the run is declared a failure.
    collision_resolution : float, default=1.0
        Spacing of collision samples along candidate edges, in cells.
    goal_radius : float, default=5.0
        Goal-ball radius used when a query is given as a bare (start, goal)
        pair; a full PlanningQuery carries its own radius and wins.
    """

    def __init__(
        self,
        step_length: float = 10.0,
        max_iterations: int = 5000,
        collision_resolution: float = 1.0,
        goal_radius: float = 5.0,
    ):
        self.step_length = step_length
        self.max_iterations = max_iterations
        self.collision_resolution = collision_resolution
        self.goal_radius = goal_radius

    def _check_params(self) -> None:
        if not self.step_length > 0:
            raise ValueError(f"step_length must be positive, got {self.step_length}")
        if not (isinstance(self.max_iterations, (int, np.integer)) and self.max_iterations >= 1):
            raise ValueError(f"max_iterations must be a count >= 1, got {self.max_iterations}")
        if not self.collision_resolution > 0:
            raise ValueError(
                f"collision_resolution must be positive, got {self.collision_resolution}"
            )
        if not self.goal_radius > 0:
            raise ValueError(f"goal_radius must be positive, got {self.goal_radius}")

    def plan(
        self,
        grid: GridMap,
        query: PlanningQuery | tuple[State, State],
        distribution: SamplingDistribution | None = None,
        rng: np.random.Generator | int = 0,
    ) -> PlanResult:
        """Run the RRT loop and return the tree, path, and run statistics.

        ``distribution`` defaults to uniform sampling over free cells;
        ``rng`` may be a seed or a generator.  Identical inputs and seed
        reproduce the result exactly, except for ``time_cost``.
        """
        self._check_params()
        if not isinstance(query, PlanningQuery):
            start, goal = query
            query = PlanningQuery(start=start, goal=goal, goal_radius=self.goal_radius)
        if distribution is None:
            distribution = uniform_distribution(grid)
        elif (distribution.width, distribution.height) != (grid.width, grid.height):
            raise DimensionMismatchError(
                f"distribution is {distribution.width}x{distribution.height}, "
                f"map is {grid.width}x{grid.height}"
            )
        if isinstance(rng, (int, np.integer)):
            rng = make_rng(rng)
        for name, s in (("start", query.start), ("goal", query.goal)):
            if not grid.is_free(s.x, s.y):
                raise InfeasibleQueryError(
                    f"{name} ({s.x}, {s.y}) is outside the map or in an obstacle cell"
                )

        start, goal = query.start, query.goal
        r_goal = query.goal_radius
        capacity = self.max_iterations + 1
        verts = np.empty((capacity, 2), dtype=np.float64)
        parents = np.zeros(capacity, dtype=np.int64)
        verts[0] = (start.x, start.y)
        n = 1

        t_begin = time.perf_counter()
        goal_index = -1
        iterations = 0
        if start.distance_to(goal) <= r_goal and collision_free(
            start, goal, grid, self.collision_resolution
        ):
            goal_index = 0
        else:
            vx = verts[:, 0]
            vy = verts[:, 1]
            for iterations in range(1, self.max_iterations + 1):
                q_rand = sample_state(distribution, rng)
                dx = vx[:n] - q_rand.x
                dy = vy[:n] - q_rand.y
                i_near = int(np.argmin(dx * dx + dy * dy))
                q_near = State(float(vx[i_near]), float(vy[i_near]))
                q_new = steer(q_near, q_rand, self.step_length)
                if not collision_free(q_near, q_new, grid, self.collision_resolution):
                    continue
                verts[n] = (q_new.x, q_new.y)
                parents[n] = i_near
                n += 1
                if q_new.distance_to(goal) <= r_goal and collision_free(
                    q_new, goal, grid, self.collision_resolution
                ):
                    goal_index = n - 1
                    break
            else:
                iterations = self.max_iterations
        elapsed = time.perf_counter() - t_begin

        tree = Tree(vertices=verts[:n].copy(), parents=parents[:n].copy())
        if goal_index < 0:
            return PlanResult(
                tree=tree,
                path=(),
                node_count=n,
                iterations_used=iterations,
                time_cost=elapsed,
                path_cost=float("nan"),
            )
        chain = [goal_index]
        while chain[-1] != 0:
            chain.append(int(tree.parents[chain[-1]]))
        path = tuple(tree.state(i) for i in reversed(chain)) + (goal,)
        return PlanResult(
            tree=tree,
            path=path,
            node_count=n,
            iterations_used=iterations,
            time_cost=elapsed,
            path_cost=path_cost(path),
        )
