"""Region-quality metrics (IoU, Dice) and benchmark-trial aggregation.

Masks are plain 2-D boolean arrays.  Both metrics count pixels:

    IoU  = TP / (TP + FN + FP)
    Dice = 2 TP / (2 TP + FN + FP)

Two empty masks score 1.0 by convention (perfect agreement), which keeps
the identity dice = 2 iou / (1 + iou) valid everywhere.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError
from .grids import HeuristicMap

SUMMARY_HEADER = (
    "map_id",
    "algorithm",
    "trials",
    "success_rate",
    "median_time_s",
    "mean_time_s",
    "median_nodes",
    "mean_nodes",
    "median_path_cost",
)


def binarize(heuristic: HeuristicMap, threshold: float = 0.5) -> np.ndarray:
    """Threshold weights into a boolean mask; weight >= threshold is True."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    return heuristic.weight >= threshold


def _check_pair(pred: np.ndarray, gt: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if pred.ndim != 2 or gt.ndim != 2:
        raise ValueError("masks must be 2-D")
    if pred.shape != gt.shape:
        raise DimensionMismatchError(f"mask shapes differ: {pred.shape} vs {gt.shape}")
    return pred, gt


def iou(pred: np.ndarray, gt: np.ndarray) -> float:
    pred, gt = _check_pair(pred, gt)
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    if tp + fp + fn == 0:
        return 1.0
    return tp / (tp + fn + fp)


def dice(pred: np.ndarray, gt: np.ndarray) -> float:
    pred, gt = _check_pair(pred, gt)
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    if tp + fp + fn == 0:
        return 1.0
    return 2 * tp / (2 * tp + fn + fp)


@dataclass(frozen=True)
class TrialRecord:
    """One benchmark trial: which map, which sampling arm, and what happened."""

    map_id: str
    algorithm: str
    seed: int
    success: bool
    time_cost: float
    node_count: int
    path_cost: float

    def __post_init__(self) -> None:
        if self.time_cost < 0:
            raise ValueError("time_cost must be nonnegative")
        if self.success and self.node_count < 1:
            raise ValueError("successful trials must have at least one node")


@dataclass(frozen=True)
class SummaryRow:
    map_id: str
    algorithm: str
    trials: int
    success_rate: float
    median_time_s: float
    mean_time_s: float
    median_nodes: float
    mean_nodes: float
    median_path_cost: float | None


def aggregate(records: Sequence[TrialRecord]) -> list[SummaryRow]:
    """Summarize trials per (map_id, algorithm) group, in lexicographic order.

    Time and node statistics cover every trial; path cost is summarized over
    successful trials only (it is undefined for failures) and reported as
    None when a group has no successes.  Medians are reported alongside
    means because RRT trial distributions are heavy-tailed.
    """
    if len(records) == 0:
        raise ValueError("aggregate requires at least one record")
    groups: dict[tuple[str, str], list[TrialRecord]] = {}
    for record in records:
        groups.setdefault((record.map_id, record.algorithm), []).append(record)
    rows = []
    for (map_id, algorithm) in sorted(groups):
        trials = groups[(map_id, algorithm)]
        times = [t.time_cost for t in trials]
        nodes = [t.node_count for t in trials]
        costs = [t.path_cost for t in trials if t.success]
        rows.append(
            SummaryRow(
                map_id=map_id,
                algorithm=algorithm,
                trials=len(trials),
                success_rate=sum(t.success for t in trials) / len(trials),
                median_time_s=float(statistics.median(times)),
                mean_time_s=float(statistics.mean(times)),
                median_nodes=float(statistics.median(nodes)),
                mean_nodes=float(statistics.mean(nodes)),
                median_path_cost=float(statistics.median(costs)) if costs else None,
            )
        )
    return rows


def summary_csv(rows: Iterable[SummaryRow]) -> str:
    """Serialize summary rows with the fixed header, UTF-8/LF."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.map_id,
                row.algorithm,
                row.trials,
                repr(row.success_rate),
                repr(row.median_time_s),
                repr(row.mean_time_s),
                repr(row.median_nodes),
                repr(row.mean_nodes),
                "" if row.median_path_cost is None else repr(row.median_path_cost),
            ]
        )
    return out.getvalue()
