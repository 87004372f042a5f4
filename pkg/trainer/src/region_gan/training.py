"""Adversarial training loop: two discriminator updates, then the generator.

One ``train_step`` performs the three updates in a fixed order and returns
five named scalar losses.  The epoch loop aggregates them, evaluates overlap
metrics and FID on held-in data, appends one CSV row per epoch, and writes a
single self-describing checkpoint file.
"""

import csv
import dataclasses
import io
import math
from pathlib import Path
from typing import Sequence

import numpy as np
import torch

from .config import TrainConfig
from .errors import TrainingDivergedError
from .fid import fid_from_images
from .losses import (
    LossWeights,
    adversarial_term,
    d_loss,
    mse_loss,
    total_supervised,
)
from .networks import Discriminator, Generator, NetConfig, build_models

METRICS_HEADER = ("epoch", "d_map", "d_point", "g_total", "iou", "dice", "fid")

Batch = tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]
Models = tuple[Generator, Discriminator, Discriminator]


def make_optimizers(models: Models, config: TrainConfig) -> dict[str, torch.optim.Optimizer]:
    generator, d_map, d_point = models
    rates = {"g": (generator, config.lr_g), "d_map": (d_map, config.lr_d_map),
             "d_point": (d_point, config.lr_d_point)}
    optimizers = {}
    for name, (model, lr) in rates.items():
        if config.optimizer == "adam":
            optimizers[name] = torch.optim.Adam(
                model.parameters(), lr=lr, betas=(config.beta1, config.beta2),
                weight_decay=config.weight_decay)
        else:
            optimizers[name] = torch.optim.SGD(
                model.parameters(), lr=lr, momentum=config.momentum,
                weight_decay=config.weight_decay)
    return optimizers


def make_schedulers(optimizers: dict[str, torch.optim.Optimizer],
                    config: TrainConfig) -> dict[str, object]:
    """Per-optimizer schedulers; the plateau variant only ever lowers lr."""
    schedulers = {}
    for name, optimizer in optimizers.items():
        if config.scheduler == "exponential":
            schedulers[name] = torch.optim.lr_scheduler.MultiStepLR(
                optimizer, milestones=list(config.decay_boundaries),
                gamma=config.gamma)
        elif config.scheduler == "plateau":
            schedulers[name] = torch.optim.lr_scheduler.ReduceLROnPlateau(
                optimizer, mode="min", factor=config.gamma)
        else:
            schedulers[name] = None
    return schedulers


def _require_finite(record: dict[str, float]) -> None:
    bad = [name for name, value in record.items() if not math.isfinite(value)]
    if bad:
        raise TrainingDivergedError(
            f"non-finite losses {bad}; training aborted", record)


def train_step(batch: Batch, models: Models,
               optimizers: dict[str, torch.optim.Optimizer],
               weights: LossWeights | None = None,
               config: TrainConfig | None = None) -> dict[str, float]:
    """One D_map update, one D_point update, one G update, in that order.

    Returns {d_map, d_point, g_adv_map, g_adv_point, g_recon}; raises
    TrainingDivergedError with the partial record if any loss is non-finite.
    """
    weights = weights or LossWeights()
    config = config or TrainConfig()
    generator, d_map, d_point = models
    maps, points, noise, targets = batch
    record: dict[str, float] = {}

    fake = generator(maps, points, noise)
    detached = fake.detach()
    for name, disc, conditioning in (("d_map", d_map, maps),
                                     ("d_point", d_point, points)):
        loss = d_loss(disc(conditioning, targets), disc(conditioning, detached),
                      targets, detached, weights, config.bce_mode)
        record[name] = loss.item()
        _require_finite(record)
        optimizers[name].zero_grad()
        loss.backward()
        optimizers[name].step()

    adv_map = weights.cbam_gen_alpha * adversarial_term(d_map(maps, fake))
    adv_point = weights.cbam_gen_beta * adversarial_term(d_point(points, fake))
    recon = (mse_loss(fake, targets, weights.mse_alpha)
             + total_supervised(targets, fake, weights, config.bce_mode))
    record["g_adv_map"] = adv_map.item()
    record["g_adv_point"] = adv_point.item()
    record["g_recon"] = recon.item()
    _require_finite(record)
    optimizers["g"].zero_grad()
    (adv_map + adv_point + recon).backward()
    optimizers["g"].step()
    return record


def _mask_overlap(pred: np.ndarray, gt: np.ndarray) -> tuple[float, float]:
    """Binary IoU and Dice with the empty-vs-empty pair scored (1, 1)."""
    tp = int(np.logical_and(pred, gt).sum())
    union = int(np.logical_or(pred, gt).sum())
    if union == 0:
        return 1.0, 1.0
    return tp / union, 2 * tp / (tp + int(pred.sum()) + int(gt.sum()) - tp)


def evaluate(generator: Generator, batch: Batch,
             threshold: float = 0.5) -> dict[str, float]:
    """Overlap of thresholded green channels plus FID over the batch."""
    maps, points, noise, targets = batch
    with torch.no_grad():
        fake = generator(maps, points, noise)
    fake_np = fake.cpu().numpy()
    target_np = targets.cpu().numpy()
    scores = [_mask_overlap(fake_np[i, 1] >= threshold,
                            target_np[i, 1] >= threshold)
              for i in range(fake_np.shape[0])]
    return {
        "iou": float(np.mean([s[0] for s in scores])),
        "dice": float(np.mean([s[1] for s in scores])),
        "fid": fid_from_images(target_np, fake_np),
    }


def save_checkpoint(path: str | Path, models: Models, net_config: NetConfig,
                    train_config: TrainConfig, weights: LossWeights,
                    epoch: int) -> None:
    """Single-file checkpoint with the configs stored alongside the weights."""
    generator, d_map, d_point = models
    torch.save({
        "net_config": dataclasses.asdict(net_config),
        "train_config": dataclasses.asdict(train_config),
        "loss_weights": dataclasses.asdict(weights),
        "epoch": epoch,
        "generator": generator.state_dict(),
        "d_map": d_map.state_dict(),
        "d_point": d_point.state_dict(),
    }, str(path))


def load_checkpoint(path: str | Path
                    ) -> tuple[Models, NetConfig, TrainConfig, LossWeights, int]:
    """Rebuild the models from a checkpoint's stored config and weights."""
    payload = torch.load(str(path), weights_only=True)
    net_config = NetConfig(**payload["net_config"])
    train_config = TrainConfig(**{
        key: tuple(value) if isinstance(value, list) else value
        for key, value in payload["train_config"].items()})
    weights = LossWeights(**payload["loss_weights"])
    models = build_models(net_config)
    for model, key in zip(models, ("generator", "d_map", "d_point")):
        model.load_state_dict(payload[key])
    return models, net_config, train_config, weights, payload["epoch"]


def train(batches: Sequence[Batch], net_config: NetConfig,
          train_config: TrainConfig, weights: LossWeights,
          out_dir: str | Path) -> tuple[Models, str]:
    """Full loop over epochs and batches; returns models and the metrics CSV.

    Writes ``metrics.csv`` (one row per epoch) and ``checkpoint.pt`` into
    out_dir; evaluation runs on the first batch each epoch.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    models = build_models(net_config, train_config.seed)
    optimizers = make_optimizers(models, train_config)
    schedulers = make_schedulers(optimizers, train_config)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for epoch in range(1, train_config.epochs + 1):
        records = [train_step(batch, models, optimizers, weights, train_config)
                   for batch in batches]
        d_map_mean = float(np.mean([r["d_map"] for r in records]))
        d_point_mean = float(np.mean([r["d_point"] for r in records]))
        g_total = float(np.mean([r["g_adv_map"] + r["g_adv_point"] + r["g_recon"]
                                 for r in records]))
        scores = evaluate(models[0], batches[0])
        writer.writerow([epoch, repr(d_map_mean), repr(d_point_mean),
                         repr(g_total), repr(scores["iou"]),
                         repr(scores["dice"]), repr(scores["fid"])])
        for scheduler in schedulers.values():
            if isinstance(scheduler, torch.optim.lr_scheduler.ReduceLROnPlateau):
                scheduler.step(g_total)
            elif scheduler is not None:
                scheduler.step()
        save_checkpoint(out_dir / "checkpoint.pt", models, net_config,
                        train_config, weights, epoch)
    text = buffer.getvalue()
    (out_dir / "metrics.csv").write_text(text)
    return models, text
