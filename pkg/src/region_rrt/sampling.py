"""Promising-region biased sampling for the planner.

The sampling distribution is a convex mixture over free cells: with weight
``mix`` the normalized heuristic map, with weight ``1 - mix`` the uniform
distribution over free space.  Any ``mix`` below 1 keeps every free cell in
the support, preserving the planner's probabilistic completeness while
concentrating samples where the heuristic says feasible paths lie.

States are drawn cell-first (inverse CDF over the per-cell mass) and then
jittered uniformly inside the chosen unit cell, which turns a
pixel-resolution heuristic into a continuous sampler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import DegenerateHeuristicError, DegenerateMapError, DimensionMismatchError
from .grids import GridMap, HeuristicMap, State

MASS_TOLERANCE = 1e-9


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; equal seeds give identical streams on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(base: int, index: int) -> int:
    """Per-trial / per-sample seed convention: base + index."""
    return int(base) + int(index)


@dataclass(frozen=True)
class SamplingDistribution:
    """Normalized discrete distribution over the free cells of a grid.

    ``mass`` and ``cumulative`` are row-major over cells; ``mix`` records the
    heuristic/uniform blend the mass was built from.
    """

    width: int
    height: int
    mass: np.ndarray
    cumulative: np.ndarray
    mix: float

    def __post_init__(self) -> None:
        mass = np.ascontiguousarray(np.asarray(self.mass, dtype=np.float64))
        cumulative = np.ascontiguousarray(np.asarray(self.cumulative, dtype=np.float64))
        if mass.shape != (self.width * self.height,):
            raise ValueError(f"mass length {mass.size} != {self.width * self.height} cells")
        if cumulative.shape != mass.shape:
            raise ValueError("cumulative table must match mass length")
        if mass.min(initial=0.0) < 0.0:
            raise ValueError("mass must be nonnegative")
        if abs(mass.sum() - 1.0) > MASS_TOLERANCE:
            raise ValueError(f"mass must sum to 1 within {MASS_TOLERANCE}, got {mass.sum()!r}")
        if not 0.0 <= self.mix <= 1.0:
            raise ValueError(f"mix must lie in [0, 1], got {self.mix}")
        mass.setflags(write=False)
        cumulative.setflags(write=False)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "cumulative", cumulative)
        object.__setattr__(self, "_last_support", int(np.flatnonzero(mass)[-1]))


def build_distribution(
    heuristic: HeuristicMap, grid: GridMap, mix: float
) -> SamplingDistribution:
    """Blend heuristic and uniform mass over free cells.

    For a free cell c: mass(c) = mix * h(c)/sum(h) + (1 - mix)/n_free.
    Obstacle cells always get zero mass.  A positive ``mix`` requires the
    masked heuristic to carry positive total mass; silently substituting the
    uniform distribution would hide a degenerate upstream prediction.
    """
    if not 0.0 <= mix <= 1.0:
        raise ValueError(f"mix must lie in [0, 1], got {mix}")
    if (heuristic.width, heuristic.height) != (grid.width, grid.height):
        raise DimensionMismatchError(
            f"heuristic is {heuristic.width}x{heuristic.height}, "
            f"map is {grid.width}x{grid.height}"
        )
    free = grid.free_mask.ravel()
    n_free = int(free.sum())
    if n_free == 0:
        raise DegenerateMapError("map has no free cells")
    masked = np.where(free, heuristic.weight.ravel(), 0.0)
    total = masked.sum()
    if mix > 0.0 and total <= 0.0:
        raise DegenerateHeuristicError(
            "heuristic has zero total mass over free cells; cannot mix with weight "
            f"{mix}"
        )
    mass = np.zeros(free.size, dtype=np.float64)
    if mix > 0.0:
        mass += mix * (masked / total)
    if mix < 1.0:
        mass[free] += (1.0 - mix) / n_free
    mass /= mass.sum()
    return SamplingDistribution(
        width=grid.width,
        height=grid.height,
        mass=mass,
        cumulative=np.cumsum(mass),
        mix=mix,
    )


def uniform_distribution(grid: GridMap) -> SamplingDistribution:
    """Uniform mass over free cells (the mix = 0 distribution)."""
    free = grid.free_mask.ravel()
    n_free = int(free.sum())
    if n_free == 0:
        raise DegenerateMapError("map has no free cells")
    mass = np.where(free, 1.0 / n_free, 0.0)
    mass /= mass.sum()
    return SamplingDistribution(
        width=grid.width,
        height=grid.height,
        mass=mass,
        cumulative=np.cumsum(mass),
        mix=0.0,
    )


def _cells_from_uniforms(dist: SamplingDistribution, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(dist.cumulative, u, side="right")
    # Floating cumsum can top out marginally below 1; clamp into the support.
    return np.minimum(idx, dist._last_support)


def sample_state(dist: SamplingDistribution, rng: np.random.Generator) -> State:
    """Draw one state: inverse-CDF cell choice plus uniform in-cell jitter."""
    u, jx, jy = rng.random(3)
    idx = int(_cells_from_uniforms(dist, np.asarray([u]))[0])
    col, row = idx % dist.width, idx // dist.width
    return State(x=col + jx, y=row + jy)


def sample_states(dist: SamplingDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw n states as an (n, 2) array of (x, y).

    Consumes the same uniform stream as n successive ``sample_state`` calls,
    so batched and sequential sampling are interchangeable under a seed.
    """
    draws = rng.random((n, 3))
    idx = _cells_from_uniforms(dist, draws[:, 0])
    cols = idx % dist.width
    rows = idx // dist.width
    return np.column_stack((cols + draws[:, 1], rows + draws[:, 2]))


def sample_uniform(grid: GridMap, rng: np.random.Generator) -> State:
    """Draw uniformly over free space; equivalent to mix = 0 sampling."""
    return sample_state(uniform_distribution(grid), rng)


class HeuristicSampler(BaseEstimator):
    """Estimator facade over the mixture distribution.

    Parameters
    ----------
    mix : float, default=0.5
        Heuristic weight of the mixture; 0 is uniform sampling, 1 samples
        the promising region exclusively.

    Attributes
    ----------
    distribution_ : SamplingDistribution
        Built by ``fit`` from a heuristic map and its grid.
    """

    def __init__(self, mix: float = 0.5):
        self.mix = mix

    def fit(self, heuristic: HeuristicMap, grid: GridMap) -> "HeuristicSampler":
        self.distribution_ = build_distribution(heuristic, grid, self.mix)
        return self

    def sample(self, rng: np.random.Generator) -> State:
        check_is_fitted(self, "distribution_")
        return sample_state(self.distribution_, rng)

    def sample_batch(self, rng: np.random.Generator, n: int) -> np.ndarray:
        check_is_fitted(self, "distribution_")
        return sample_states(self.distribution_, rng, n)
