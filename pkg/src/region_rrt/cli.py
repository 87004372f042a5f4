"""Command-line front end: plan one query, benchmark a corpus, score a
predicted region against ground truth, or augment a bundle.

Exit codes: 0 success, 1 input error (message names the offending flag),
2 planning or augmentation failure.  All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .augment import AugmentParams, Sample, augment_sample_detailed
from .errors import (
    AugmentationError,
    DegenerateHeuristicError,
    DegenerateMapError,
    DimensionMismatchError,
    FormatError,
    QueryError,
)
from .grids import (
    BLUE,
    GridMap,
    HeuristicMap,
    PlanningQuery,
    RED,
    State,
    _paint_disc,
    decode_query,
    encode_query,
    load_grid_map,
    load_heuristic,
    read_weights,
    save_grid_map,
    save_heuristic,
)
from .metrics import TrialRecord, aggregate, binarize, dice, iou, summary_csv
from .netpbm import read_ppm, write_ppm
from .planner import PlanResult, RRTPlanner
from .sampling import SamplingDistribution, build_distribution, make_rng, uniform_distribution

RAW_HEADER = ("map_id", "algorithm", "seed", "success", "time_s", "nodes", "iterations", "path_cost")

_GRAY = (160, 160, 160)
_PALE_GREEN = (200, 255, 200)

_INPUT_ERRORS = (
    FormatError,
    DimensionMismatchError,
    QueryError,
    DegenerateHeuristicError,
    DegenerateMapError,
    OSError,
    ValueError,
)


class CliError(Exception):
    """Input error; the message names the flag or file at fault."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; the contract reserves
    # 2 for planning failures, so route argument errors through CliError.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise CliError(message)


def _guard(flag: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _INPUT_ERRORS as exc:
        raise CliError(f"{flag}: {exc}") from exc


def _load_map(path: str, flag: str = "--map") -> GridMap:
    data = _guard(flag, Path(path).read_bytes)
    return _guard(flag, load_grid_map, data)


def _parse_state(text: str, flag: str) -> State:
    try:
        x_text, y_text = text.split(",")
        return State(float(x_text), float(y_text))
    except (ValueError, TypeError) as exc:
        raise CliError(f"{flag}: expected X,Y with numeric coordinates, got {text!r}") from exc


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    if value is None:
        return ""
    return str(value)


def _raw_csv(rows: list[tuple[str, str, int, PlanResult]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(RAW_HEADER)
    for map_id, algorithm, seed, result in rows:
        writer.writerow(
            [
                map_id,
                algorithm,
                seed,
                _format(result.success),
                _format(result.time_cost),
                result.node_count,
                result.iterations_used,
                _format(result.path_cost),
            ]
        )
    return buffer.getvalue()


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def _planner(args: argparse.Namespace) -> RRTPlanner:
    try:
        return RRTPlanner(
            step_length=args.step,
            max_iterations=args.max_iters,
            collision_resolution=args.resolution,
            goal_radius=args.goal_radius,
        )
    except ValueError as exc:
        raise CliError(f"planner flags: {exc}") from exc


def _draw_segment(image: np.ndarray, a: tuple[float, float], b: tuple[float, float],
                  color: tuple[int, int, int]) -> None:
    height, width = image.shape[:2]
    steps = max(1, math.ceil(math.hypot(b[0] - a[0], b[1] - a[1]) / 0.25))
    ts = np.linspace(0.0, 1.0, steps + 1)
    cols = np.clip((a[0] + ts * (b[0] - a[0])).astype(np.int64), 0, width - 1)
    rows = np.clip((a[1] + ts * (b[1] - a[1])).astype(np.int64), 0, height - 1)
    image[rows, cols] = color


def _render_overlay(grid: GridMap, result: PlanResult, query: PlanningQuery,
                    heuristic: HeuristicMap | None) -> bytes:
    base = np.where(grid.occupancy, 0, 255).astype(np.uint8)
    image = np.repeat(base[:, :, None], 3, axis=2)
    if heuristic is not None:
        image[(heuristic.weight > 0.5) & grid.free_mask] = _PALE_GREEN
    tree = result.tree
    for index in range(1, len(tree)):
        parent = int(tree.parents[index])
        _draw_segment(image, tuple(tree.vertices[parent]), tuple(tree.vertices[index]), _GRAY)
    for first, second in zip(result.path[:-1], result.path[1:]):
        _draw_segment(image, (first.x, first.y), (second.x, second.y), RED)
    _paint_disc(image, int(query.goal.x), int(query.goal.y), 2, BLUE)
    _paint_disc(image, int(query.start.x), int(query.start.y), 2, RED)
    return write_ppm(image)


def _map_id(path: str) -> str:
    name = Path(path).name
    for suffix in (".map.pgm", ".pgm"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name


def cmd_plan(args: argparse.Namespace) -> int:
    grid = _load_map(args.map)
    if (args.start is None) != (args.goal is None):
        raise CliError("--start/--goal: both must be given together")
    query_flag = "--start/--goal" if args.start is not None else "--query"
    if args.start is not None:
        query = PlanningQuery(
            start=_parse_state(args.start, "--start"),
            goal=_parse_state(args.goal, "--goal"),
            goal_radius=args.goal_radius,
        )
    elif args.query is not None:
        image = _guard("--query", read_ppm, _guard("--query", Path(args.query).read_bytes))
        query = _guard(
            "--query", decode_query, image, grid, args.goal_radius, args.color_tol
        )
    else:
        raise CliError("--query: required unless --start and --goal are given")

    heuristic = None
    if args.heuristic is not None:
        data = _guard("--heuristic", Path(args.heuristic).read_bytes)
        heuristic = _guard("--heuristic", load_heuristic, data, grid)
        distribution = _guard("--heuristic", build_distribution, heuristic, grid, args.mix)
        algorithm = "heuristic"
    else:
        distribution = _guard("--map", uniform_distribution, grid)
        algorithm = "uniform"

    result = _guard(query_flag, _planner(args).plan, grid, query,
                    distribution=distribution, rng=make_rng(args.seed))
    _write_text(args.out, _raw_csv([(_map_id(args.map), algorithm, args.seed, result)]))
    if args.overlay is not None:
        Path(args.overlay).write_bytes(_render_overlay(grid, result, query, heuristic))
    return 0 if result.success else 2


@dataclass(frozen=True)
class BenchConfig:
    """One benchmark run: corpus, arms, sampling mix, trial count, seeds,
    planner settings, and the output directory."""

    corpus: Path
    algorithms: tuple[str, ...]
    mix: float
    trials: int
    seed: int
    planner: RRTPlanner
    goal_radius: float
    color_tolerance: int
    out: Path

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("--trials: must be at least 1")
        if not self.algorithms:
            raise ValueError("--algorithms: must not be empty")


def _bundle_names(corpus: Path) -> list[str]:
    names = sorted(p.name[: -len(".map.pgm")] for p in corpus.glob("*.map.pgm"))
    if not names:
        raise CliError(f"--corpus: no *.map.pgm bundles found in {corpus}")
    return names


def _load_bundle(corpus: Path, name: str, config: BenchConfig):
    grid = _load_map(str(corpus / f"{name}.map.pgm"), flag=f"--corpus ({name}.map.pgm)")
    query_path = corpus / f"{name}.query.ppm"
    flag = f"--corpus ({query_path.name})"
    image = _guard(flag, read_ppm, _guard(flag, query_path.read_bytes))
    query = _guard(flag, decode_query, image, grid, config.goal_radius, config.color_tolerance)
    heuristic = None
    if "heuristic" in config.algorithms:
        for candidate in (f"{name}.heur.pgm", f"{name}.gt.pgm"):
            path = corpus / candidate
            if path.exists():
                flag = f"--corpus ({candidate})"
                heuristic = _guard(flag, load_heuristic, _guard(flag, path.read_bytes), grid)
                break
        else:
            raise CliError(
                f"--corpus: {name} has no {name}.heur.pgm or {name}.gt.pgm "
                "but the heuristic algorithm was requested"
            )
    return grid, query, heuristic


def run_bench(config: BenchConfig) -> tuple[str, str]:
    """Run the full benchmark; returns (raw CSV, summary CSV) text."""
    names = _bundle_names(config.corpus)
    bundles = {name: _load_bundle(config.corpus, name, config) for name in names}
    distributions: dict[tuple[str, str], SamplingDistribution] = {}
    for name in names:
        grid, _, heuristic = bundles[name]
        for algorithm in config.algorithms:
            if algorithm == "uniform":
                distributions[name, algorithm] = uniform_distribution(grid)
            else:
                flag = f"--corpus ({name})"
                distributions[name, algorithm] = _guard(
                    flag, build_distribution, heuristic, grid, config.mix
                )

    tasks = [
        (name, algorithm, config.seed + trial)
        for name in names
        for algorithm in config.algorithms
        for trial in range(config.trials)
    ]

    def run(task: tuple[str, str, int]) -> PlanResult:
        name, algorithm, seed = task
        grid, query, _ = bundles[name]
        return config.planner.plan(
            grid, query, distribution=distributions[name, algorithm], rng=make_rng(seed)
        )

    threads = int(os.environ.get("REGION_RRT_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))
    else:
        results = [run(task) for task in tasks]

    rows = [(name, algorithm, seed, result)
            for (name, algorithm, seed), result in zip(tasks, results)]
    records = [
        TrialRecord(
            map_id=name,
            algorithm=algorithm,
            seed=seed,
            success=result.success,
            time_cost=result.time_cost,
            node_count=result.node_count,
            path_cost=result.path_cost,
        )
        for name, algorithm, seed, result in rows
    ]
    return _raw_csv(rows), summary_csv(aggregate(records))


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        config = BenchConfig(
            corpus=Path(args.corpus),
            algorithms=tuple(dict.fromkeys(args.algorithms)),
            mix=args.mix,
            trials=args.trials,
            seed=args.seed,
            planner=_planner(args),
            goal_radius=args.goal_radius,
            color_tolerance=args.color_tol,
            out=Path(args.out),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    raw, summary = run_bench(config)
    config.out.mkdir(parents=True, exist_ok=True)
    (config.out / "raw.csv").write_text(raw, encoding="utf-8", newline="")
    (config.out / "summary.csv").write_text(summary, encoding="utf-8", newline="")
    sys.stdout.write(summary)
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    pred = _guard("--pred", read_weights, _guard("--pred", Path(args.pred).read_bytes))
    gt = _guard("--gt", read_weights, _guard("--gt", Path(args.gt).read_bytes))
    if (pred.width, pred.height) != (gt.width, gt.height):
        raise CliError(
            f"--pred: dimensions {pred.width}x{pred.height} do not match "
            f"--gt {gt.width}x{gt.height}"
        )
    try:
        pred_mask = binarize(pred, args.threshold)
        gt_mask = binarize(gt, args.threshold)
    except ValueError as exc:
        raise CliError(f"--threshold: {exc}") from exc
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("iou", "dice"))
    writer.writerow((repr(iou(pred_mask, gt_mask)), repr(dice(pred_mask, gt_mask))))
    _write_text(args.out, buffer.getvalue())
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    grid = _load_map(args.map)
    image = _guard("--query", read_ppm, _guard("--query", Path(args.query).read_bytes))
    query = _guard("--query", decode_query, image, grid, args.goal_radius, args.color_tol)
    region = _guard("--region", load_heuristic, _guard("--region", Path(args.region).read_bytes), grid)
    sample = _guard("--query", Sample, grid=grid, region=region, query=query)
    try:
        params = AugmentParams(
            height_shift=args.height_shift,
            width_shift=args.width_shift,
            shift_step=args.shift_step,
            rotation_probability=args.rotation_prob,
            maps_to_generate=args.count,
            shear_degrees=tuple(args.shear),
            brightness_range=tuple(args.brightness),
        )
    except ValueError as exc:
        raise CliError(f"augment flags: {exc}") from exc

    outputs = augment_sample_detailed(sample, params, make_rng(args.seed))
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("index", "map", "query", "region", "transform"))
    for index, (out_sample, transform) in enumerate(outputs):
        stem = f"{args.prefix}_{index:03d}"
        files = {
            "map": (f"{stem}.map.pgm", save_grid_map(out_sample.grid)),
            "query": (f"{stem}.query.ppm", encode_query(out_sample.grid, out_sample.query)),
            "region": (f"{stem}.gt.pgm", save_heuristic(out_sample.region)),
        }
        for filename, data in files.values():
            (outdir / filename).write_bytes(data)
        writer.writerow(
            (index, files["map"][0], files["query"][0], files["region"][0], transform.describe())
        )
    (outdir / f"{args.prefix}_manifest.csv").write_text(
        buffer.getvalue(), encoding="utf-8", newline=""
    )
    return 0


def _add_planner_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--step", type=float, default=10.0,
                        help="steering step length in cells (default 10)")
    parser.add_argument("--max-iters", type=int, default=5000,
                        help="iteration budget (default 5000)")
    parser.add_argument("--resolution", type=float, default=1.0,
                        help="collision-check spacing in cells (default 1)")
    parser.add_argument("--goal-radius", type=float, default=5.0,
                        help="goal acceptance radius in cells (default 5)")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("--color-tol", type=int, default=0,
                        help="per-channel tolerance for query dot colors (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="region-rrt", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    plan = commands.add_parser("plan", help="plan one query on one map")
    plan.add_argument("--map", required=True, help="occupancy map (P5)")
    plan.add_argument("--query", help="query image with start/goal dots (P6)")
    plan.add_argument("--start", help="start as X,Y (overrides --query)")
    plan.add_argument("--goal", help="goal as X,Y (overrides --query)")
    plan.add_argument("--heuristic", help="promising-region weights (P5)")
    plan.add_argument("--lambda", dest="mix", type=float, default=0.5,
                      help="heuristic mixing weight in [0,1] (default 0.5)")
    plan.add_argument("--out", help="result CSV path (default: stdout)")
    plan.add_argument("--overlay", help="write tree+path overlay (P6) here")
    _add_planner_flags(plan)
    _add_common_flags(plan)
    plan.set_defaults(func=cmd_plan)

    bench = commands.add_parser("bench", help="run seeded trials over a corpus")
    bench.add_argument("--corpus", required=True, help="directory of bundles")
    bench.add_argument("--algorithms", nargs="+", choices=("uniform", "heuristic"),
                       default=["uniform", "heuristic"],
                       help="sampling arms to run (default: both)")
    bench.add_argument("--lambda", dest="mix", type=float, default=0.5,
                       help="heuristic mixing weight in [0,1] (default 0.5)")
    bench.add_argument("--trials", type=int, default=10,
                       help="trials per map and algorithm (default 10)")
    bench.add_argument("--out", default="bench_out",
                       help="output directory for raw.csv and summary.csv")
    _add_planner_flags(bench)
    _add_common_flags(bench)
    bench.set_defaults(func=cmd_bench)

    score = commands.add_parser("score", help="compare predicted and ground-truth regions")
    score.add_argument("--pred", required=True, help="predicted region (P5)")
    score.add_argument("--gt", required=True, help="ground-truth region (P5)")
    score.add_argument("--threshold", type=float, default=0.5,
                       help="binarization threshold in (0,1) (default 0.5)")
    score.add_argument("--out", help="metrics CSV path (default: stdout)")
    score.set_defaults(func=cmd_score)

    augment = commands.add_parser("augment", help="write augmented copies of a bundle")
    augment.add_argument("--map", required=True, help="occupancy map (P5)")
    augment.add_argument("--query", required=True, help="query image (P6)")
    augment.add_argument("--region", required=True, help="region weights (P5)")
    augment.add_argument("--outdir", required=True, help="directory for augmented bundles")
    augment.add_argument("--prefix", default="aug", help="output name prefix (default aug)")
    augment.add_argument("--count", type=int, default=10,
                         help="augmented bundles to produce (default 10)")
    augment.add_argument("--height-shift", type=int, default=2)
    augment.add_argument("--width-shift", type=int, default=2)
    augment.add_argument("--shift-step", type=int, default=1)
    augment.add_argument("--rotation-prob", type=float, default=0.5)
    augment.add_argument("--shear", type=float, nargs=2, default=(0.0, 0.0),
                         metavar=("LO", "HI"), help="shear angle range in degrees")
    augment.add_argument("--brightness", type=float, nargs=2, default=(1.0, 1.0),
                         metavar=("LO", "HI"), help="region brightness factor range")
    augment.add_argument("--goal-radius", type=float, default=5.0)
    _add_common_flags(augment)
    augment.set_defaults(func=cmd_augment)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AugmentationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
