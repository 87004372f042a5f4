"""Heuristic-guided RRT planning on 2-D occupancy grids.

The package covers the full loop: netpbm map/query/region I/O, a seeded
sampler that mixes a promising-region heuristic with uniform coverage,
the RRT planner itself, segmentation and trial metrics, paired-image
augmentation, and a benchmark CLI.
"""

from .augment import (
    AugmentParams,
    Sample,
    Transform,
    augment_sample,
    augment_sample_detailed,
    brighten_region,
    rescale_pixels,
    rotate_sample,
    shear_region,
    shift_sample,
)
from .errors import (
    AugmentationError,
    DegenerateHeuristicError,
    DegenerateMapError,
    DimensionMismatchError,
    FormatError,
    InfeasibleQueryError,
    QueryError,
)
from .grids import (
    GridMap,
    HeuristicMap,
    PlanningQuery,
    State,
    decode_query,
    encode_query,
    load_grid_map,
    load_heuristic,
    read_weights,
    save_grid_map,
    save_heuristic,
    save_overlay,
)
from .metrics import (
    SummaryRow,
    TrialRecord,
    aggregate,
    binarize,
    dice,
    iou,
    summary_csv,
)
from .netpbm import read_pgm, read_ppm, write_pgm, write_ppm
from .planner import (
    PlanResult,
    RRTPlanner,
    Tree,
    collision_free,
    nearest,
    path_cost,
    steer,
)
from .sampling import (
    HeuristicSampler,
    SamplingDistribution,
    build_distribution,
    derive_seed,
    make_rng,
    sample_state,
    sample_states,
    sample_uniform,
    uniform_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentParams",
    "AugmentationError",
    "DegenerateHeuristicError",
    "DegenerateMapError",
    "DimensionMismatchError",
    "FormatError",
    "GridMap",
    "HeuristicMap",
    "HeuristicSampler",
    "InfeasibleQueryError",
    "PlanResult",
    "PlanningQuery",
    "QueryError",
    "RRTPlanner",
    "Sample",
    "SamplingDistribution",
    "State",
    "SummaryRow",
    "Transform",
    "Tree",
    "aggregate",
    "augment_sample",
    "augment_sample_detailed",
    "binarize",
    "brighten_region",
    "build_distribution",
    "collision_free",
    "decode_query",
    "derive_seed",
    "dice",
    "encode_query",
    "iou",
    "load_grid_map",
    "load_heuristic",
    "make_rng",
    "nearest",
    "path_cost",
    "read_pgm",
    "read_ppm",
    "read_weights",
    "rescale_pixels",
    "rotate_sample",
    "sample_state",
    "sample_states",
    "sample_uniform",
    "save_grid_map",
    "save_heuristic",
    "save_overlay",
    "shear_region",
    "shift_sample",
    "steer",
    "summary_csv",
    "uniform_distribution",
    "write_pgm",
    "write_ppm",
]
