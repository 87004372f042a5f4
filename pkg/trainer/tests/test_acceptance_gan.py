"""Acceptance suite for the trainer: one test per criterion, one verdict line.

The bridge test reaches the planner only through its command line and byte
formats, so the planner suite keeps passing when this package is absent.
"""

import csv
import io
import subprocess
import sys
import time

import numpy as np
import torch

import conftest
from gan_oracles import central_difference
from region_gan import (
    CBAM,
    MomentPair,
    NetConfig,
    TrainConfig,
    bce_xy,
    build_models,
    dice_loss,
    export_heuristic,
    export_map,
    fid,
    kaiming_init,
    make_optimizers,
    mse_loss,
    total_supervised,
    train_step,
)
from region_gan.data import make_scene, synthetic_batch


def _verdict(name: str, passed: bool, detail: str) -> None:
    conftest.record(name, passed, detail)
    line = f"{'PASS' if passed else 'FAIL'} {name}: {detail}"
    print(line)
    assert passed, line


def test_fid_closed_forms():
    start = time.perf_counter()
    rng = np.random.default_rng(60)
    worst_self = 0.0
    for dim in (2, 4, 8, 16, 64):
        m = rng.standard_normal((dim, dim))
        pair = MomentPair(rng.standard_normal(dim),
                          m @ m.T + 0.1 * np.eye(dim))
        worst_self = max(worst_self, abs(fid(pair, pair)))
    gap_1d = abs(fid(MomentPair(np.zeros(1), np.ones((1, 1))),
                     MomentPair(np.ones(1), np.ones((1, 1)))) - 1.0)
    gap_2d = abs(fid(MomentPair(np.zeros(2), np.diag([1.0, 4.0])),
                     MomentPair(np.zeros(2), np.diag([4.0, 1.0]))) - 2.0)
    elapsed = time.perf_counter() - start
    _verdict(
        "fid-closed-forms",
        worst_self <= 1e-6 and gap_1d <= 1e-9 and gap_2d <= 1e-9,
        f"self-distance {worst_self:.2e} <= 1e-6 over 5 random moment pairs; "
        f"1-D unit-mean-shift gap {gap_1d:.2e} and 2-D swapped-diagonal gap "
        f"{gap_2d:.2e} <= 1e-9; {elapsed:.2f}s",
    )


def test_gradient_checks():
    start = time.perf_counter()
    g = torch.Generator().manual_seed(61)
    p = torch.rand(1, 1, 4, 4, generator=g, dtype=torch.float64)
    base = torch.rand(1, 1, 4, 4, generator=g, dtype=torch.float64)
    losses = {
        "bce": lambda q: bce_xy(p, q),
        "bce_axiswise": lambda q: bce_xy(p, q, mode="axiswise"),
        "dice": lambda q: dice_loss(p, q),
        "mse": lambda q: mse_loss(q, p),
    }
    worst_loss = 0.0
    for fn in losses.values():
        q = base.clone().requires_grad_()
        fn(q).backward()
        grads = q.grad.reshape(-1)

        def scalar(flat, fn=fn):
            return float(fn(torch.as_tensor(flat).reshape(1, 1, 4, 4)))

        flat = base.numpy().reshape(-1).copy()
        for index in range(flat.size):
            numeric = central_difference(scalar, flat, index)
            rel = abs(float(grads[index]) - numeric) / max(abs(numeric), 1e-8)
            worst_loss = max(worst_loss, rel)

    config = NetConfig(image_size=16, depth=2)
    generator = build_models(config, seed=62)[0].double()
    g = torch.Generator().manual_seed(62)
    maps = torch.rand(1, 3, 16, 16, generator=g, dtype=torch.float64)
    points = torch.rand(1, 3, 16, 16, generator=g, dtype=torch.float64)
    noise = torch.rand(1, 1, 16, 16, generator=g, dtype=torch.float64)
    target = torch.rand(1, 3, 16, 16, generator=g, dtype=torch.float64)

    def loss_value():
        return mse_loss(generator(maps, points, noise), target, 1.0)

    generator.zero_grad()
    loss_value().backward()
    params = dict(generator.named_parameters())
    names = ["encoder.0.conv.weight", "residual.0.body.0.conv.weight",
             "attention.channel.w1.weight", "attention.spatial.w2.weight",
             "decoder.1.conv.weight", "decoder.1.conv.bias"]
    step = 1e-5
    worst_param = 0.0
    for name in names:
        param = params[name]
        index = int(param.grad.abs().reshape(-1).argmax())
        analytic = float(param.grad.reshape(-1)[index])
        with torch.no_grad():
            param.data.view(-1)[index] += step
            plus = float(loss_value())
            param.data.view(-1)[index] -= 2.0 * step
            minus = float(loss_value())
            param.data.view(-1)[index] += step
        numeric = (plus - minus) / (2.0 * step)
        rel = abs(analytic - numeric) / max(abs(numeric), 1e-8)
        worst_param = max(worst_param, rel)
    elapsed = time.perf_counter() - start
    _verdict(
        "gradient-checks",
        worst_loss <= 1e-4 and worst_param <= 1e-3,
        f"loss gradients vs central differences: worst rel {worst_loss:.2e} "
        f"<= 1e-4 over all 4x4 entries of 4 losses; generator spot-check on "
        f"{len(names)} parameters of the 16x16 config: worst rel "
        f"{worst_param:.2e} <= 1e-3; {elapsed:.1f}s",
    )


def test_shape_range_suite():
    start = time.perf_counter()
    torch.manual_seed(63)
    problems = []
    for spatial in (False, True):
        for channel in (False, True):
            block = CBAM(64, NetConfig(spatial=spatial, channel=channel))
            block.apply(kaiming_init)
            x = torch.randn(2, 64, 8, 8)
            out = block(x)
            if out.shape != x.shape:
                problems.append(f"cbam shape spatial={spatial} channel={channel}")
            if not spatial and not channel and not torch.equal(out, x):
                problems.append("toggles-off identity broken")

    block = CBAM(64, NetConfig())
    block.apply(kaiming_init)
    x = torch.randn(2, 64, 8, 8)
    with torch.no_grad():
        gates = (("spatial", block.spatial.gate(x)),
                 ("channel", block.channel.gate(x)))
    for label, gate in gates:
        if not (0.0 < float(gate.min()) and float(gate.max()) < 1.0):
            problems.append(f"{label} gate left (0,1)")

    generator = build_models(NetConfig(), seed=63)[0]
    with torch.no_grad():
        out = generator(torch.rand(1, 3, 256, 256),
                        torch.rand(1, 3, 256, 256),
                        torch.rand(1, 1, 256, 256))
    if out.shape != (1, 3, 256, 256):
        problems.append(f"generator shape {tuple(out.shape)}")
    if not (0.0 < float(out.min()) and float(out.max()) < 1.0):
        problems.append("generator output left (0,1)")
    elapsed = time.perf_counter() - start
    _verdict(
        "shape-range-suite",
        not problems,
        f"cbam preserves shape in all 4 toggle combos and is the identity "
        f"with both off; gates and 3x256x256 generator output in (0,1); "
        f"{elapsed:.1f}s" + (f"; problems: {problems}" if problems else ""),
    )


def test_overfit_smoke():
    start = time.perf_counter()
    config = TrainConfig()
    models = build_models(NetConfig(image_size=64), seed=0)
    batch = synthetic_batch(2, 64, seed=7)
    optimizers = make_optimizers(models, config)

    def supervised():
        with torch.no_grad():
            fake = models[0](batch[0], batch[1], batch[2])
        return float(total_supervised(batch[3], fake))

    before = supervised()
    for _ in range(200):
        train_step(batch, models, optimizers, config=config)
    after = supervised()
    ratio = after / before
    elapsed = time.perf_counter() - start
    _verdict(
        "overfit-smoke",
        ratio <= 0.5 and elapsed < 300.0,
        f"200 train steps on one batch of 2: generator supervised loss "
        f"{before:.4f} -> {after:.4f}, ratio {ratio:.3f} <= 0.5; "
        f"{elapsed:.1f}s < 300s",
    )


def test_end_to_end_bridge(tmp_path):
    start = time.perf_counter()
    scene = make_scene(64, np.random.default_rng(11))
    maps = torch.as_tensor(scene.map_raster[None], dtype=torch.float32)
    points = torch.as_tensor(scene.point_raster[None], dtype=torch.float32)
    noise = torch.as_tensor(np.random.default_rng(12).random((1, 1, 64, 64)),
                            dtype=torch.float32)
    targets = torch.as_tensor(scene.target[None], dtype=torch.float32)
    models = build_models(NetConfig(image_size=64), seed=0)
    config = TrainConfig()
    optimizers = make_optimizers(models, config)
    for _ in range(25):
        train_step((maps, points, noise, targets), models, optimizers,
                   config=config)
    with torch.no_grad():
        region = models[0](maps, points, noise)[0].numpy()

    map_path = tmp_path / "scene.pgm"
    heuristic_path = tmp_path / "region.pgm"
    map_path.write_bytes(export_map(scene.occupancy))
    heuristic_path.write_bytes(export_heuristic(region))
    command = [sys.executable, "-m", "region_rrt.cli", "plan",
               "--map", str(map_path), "--heuristic", str(heuristic_path),
               "--start", f"{scene.start[1]}.5,{scene.start[0]}.5",
               "--goal", f"{scene.goal[1]}.5,{scene.goal[0]}.5",
               "--lambda", "0.5", "--seed", "0"]
    proc = subprocess.run(command, capture_output=True, text=True)
    rows = list(csv.DictReader(io.StringIO(proc.stdout)))
    planned = (proc.returncode == 0 and len(rows) == 1
               and rows[0]["success"] == "true"
               and rows[0]["algorithm"] == "heuristic")
    elapsed = time.perf_counter() - start
    summary = (f"success={rows[0]['success']} nodes={rows[0]['nodes']} "
               f"cost={float(rows[0]['path_cost']):.1f}"
               if rows else f"no output, stderr: {proc.stderr.strip()}")
    _verdict(
        "end-to-end-bridge",
        planned,
        f"trained 25 steps, exported map and region, planner CLI exit "
        f"{proc.returncode}, {summary}; {elapsed:.1f}s",
    )
