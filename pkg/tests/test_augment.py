"""Tests for the paired map/region/query augmentation pipeline."""

import numpy as np
import pytest

import region_rrt.augment as augment_module
from region_rrt.augment import (
    AugmentParams,
    Sample,
    Transform,
    augment_sample,
    augment_sample_detailed,
    brighten_region,
    draw_transform,
    rescale_pixels,
    rotate_sample,
    shear_region,
    shift_sample,
)
from region_rrt.errors import AugmentationError, InfeasibleQueryError
from region_rrt.grids import (
    GridMap,
    HeuristicMap,
    PlanningQuery,
    State,
    save_grid_map,
    save_heuristic,
)
from region_rrt.sampling import make_rng

IDENTITY_PARAMS = AugmentParams(
    height_shift=0, width_shift=0, shift_step=0, rotation_probability=0.0,
    maps_to_generate=3,
)


def _sample(occupancy, weights, start, goal, goal_radius=2.0):
    return Sample(
        grid=GridMap.from_occupancy(np.asarray(occupancy, dtype=bool)),
        region=HeuristicMap.from_weights(np.asarray(weights, dtype=float)),
        query=PlanningQuery(start=State(*start), goal=State(*goal), goal_radius=goal_radius),
    )


def _basic_sample():
    occ = np.zeros((8, 8), dtype=bool)
    occ[1, 1] = True
    w = np.zeros((8, 8))
    w[4, 4] = 1.0
    return _sample(occ, w, (5.5, 5.5), (4.5, 2.5))


def test_default_params_match_standard_recipe():
    p = AugmentParams()
    assert (p.height_shift, p.width_shift, p.shift_step) == (2, 2, 1)
    assert p.rotation_probability == 0.5
    assert p.maps_to_generate == 10


def test_params_validation():
    with pytest.raises(ValueError):
        AugmentParams(height_shift=-1)
    with pytest.raises(ValueError):
        AugmentParams(rotation_probability=1.5)
    with pytest.raises(ValueError):
        AugmentParams(brightness_range=(1.2, 0.8))


def test_sample_validation():
    occ = np.zeros((4, 4), dtype=bool)
    occ[2, 2] = True
    with pytest.raises(InfeasibleQueryError):
        _sample(occ, np.zeros((4, 4)), (2.5, 2.5), (0.5, 0.5))
    with pytest.raises(ValueError):
        _sample(np.zeros((4, 4)), np.zeros((4, 5)), (0.5, 0.5), (1.5, 1.5))


def test_rescale_pixels():
    out = rescale_pixels(np.array([[0, 255], [51, 128]], dtype=np.uint8))
    assert out.tolist() == [[0.0, 1.0], [0.2, 128.0 / 255.0]]


def test_shift_moves_everything_jointly():
    shifted = shift_sample(_basic_sample(), 2, 0)
    assert shifted.grid.occupancy[1, 3]
    assert not shifted.grid.occupancy[1, 1]
    assert shifted.region.weight[4, 6] == 1.0
    assert shifted.region.weight[4, 4] == 0.0
    assert (shifted.query.start.x, shifted.query.start.y) == (7.5, 5.5)


def test_shift_drops_content_and_frees_vacated_cells():
    occ = np.zeros((4, 4), dtype=bool)
    occ[0, 3] = True
    sample = _sample(occ, np.ones((4, 4)) * 0.5, (1.5, 2.5), (2.5, 2.5))
    shifted = shift_sample(sample, 1, 0)
    assert not shifted.grid.occupancy.any()
    assert np.all(shifted.region.weight[:, 0] == 0.0)
    assert np.all(shifted.region.weight[:, 1:] == 0.5)


def test_shift_out_of_bounds_query_is_rejected():
    sample = _basic_sample()
    with pytest.raises(InfeasibleQueryError):
        shift_sample(sample, 3, 0)


def test_rotate_half_turn_on_square():
    occ = np.zeros((4, 4), dtype=bool)
    occ[0, 0] = True
    sample = _sample(occ, np.diag([1.0, 0, 0, 0]), (1.25, 0.5), (2.5, 2.5))
    out = rotate_sample(sample, 2)
    assert out.grid.occupancy[3, 3] and not out.grid.occupancy[0, 0]
    assert out.region.weight[3, 3] == 1.0
    # cell (1, 0) maps to (2, 3); the in-cell offset flips in both axes
    assert (out.query.start.x, out.query.start.y) == (2.75, 3.5)


def test_rotate_quarter_turn_matches_rot90_and_moves_state():
    occ = np.zeros((4, 4), dtype=bool)
    occ[0, 1] = True
    w = np.zeros((4, 4))
    w[0, 1] = 1.0
    sample = _sample(occ, w, (0.5, 0.5), (3.5, 3.5))
    out = rotate_sample(sample, 1)
    assert np.array_equal(out.grid.occupancy, np.rot90(occ, 1))
    assert out.grid.occupancy[2, 0]
    # the free start cell (0, 0) maps to (0, 3), the region peak to (0, 2)
    assert (out.query.start.x, out.query.start.y) == (0.5, 3.5)
    assert out.region.weight[2, 0] == 1.0


def test_rotation_conserves_obstacle_count():
    rng = np.random.default_rng(3)
    occ = rng.random((6, 6)) < 0.3
    occ[1, 1] = occ[4, 4] = False
    sample = _sample(occ, np.ones((6, 6)), (1.5, 1.5), (4.5, 4.5))
    for k in range(4):
        try:
            out = rotate_sample(sample, k)
        except InfeasibleQueryError:
            continue
        assert out.grid.occupancy.sum() == occ.sum()


def _cell_after(col, row, transform, width, height):
    col, row = col + transform.dx, row + transform.dy
    for _ in range(transform.quarter_turns % 4):
        col, row, width, height = row, width - 1 - col, height, width
    return col, row


def test_joint_transform_consistency():
    occ = np.zeros((10, 10), dtype=bool)
    occ[0, :] = True
    w = np.zeros((10, 10))
    w[5, 5] = 1.0
    sample = _sample(occ, w, (4.5, 4.5), (6.5, 6.5))
    rng = make_rng(17)
    params = AugmentParams(maps_to_generate=30)
    for out, transform in augment_sample_detailed(sample, params, rng):
        want = _cell_after(4, 4, transform, 10, 10)
        got = (int(out.query.start.x), int(out.query.start.y))
        assert got == want
        # the region peak moves through the same map as the query
        peak = np.argwhere(out.region.weight == 1.0)
        assert len(peak) == 1
        assert tuple(peak[0][::-1]) == _cell_after(5, 5, transform, 10, 10)


def test_identity_params_reproduce_input():
    sample = _basic_sample()
    outputs = augment_sample(sample, IDENTITY_PARAMS, make_rng(0))
    assert len(outputs) == 3
    for out in outputs:
        assert save_grid_map(out.grid) == save_grid_map(sample.grid)
        assert save_heuristic(out.region) == save_heuristic(sample.region)
        assert out.query == sample.query


def test_zero_outputs():
    params = AugmentParams(maps_to_generate=0)
    assert augment_sample(_basic_sample(), params, make_rng(0)) == []


def test_augment_is_deterministic():
    sample = _basic_sample()
    params = AugmentParams(maps_to_generate=8, shear_degrees=(-10.0, 10.0),
                           brightness_range=(0.7, 1.3))
    first = augment_sample_detailed(sample, params, make_rng(42))
    second = augment_sample_detailed(sample, params, make_rng(42))
    assert [t for _, t in first] == [t for _, t in second]
    for (a, _), (b, _) in zip(first, second):
        assert save_grid_map(a.grid) == save_grid_map(b.grid)
        assert save_heuristic(a.region) == save_heuristic(b.region)
        assert a.query == b.query


def test_all_outputs_feasible_despite_rejections():
    # start is boxed in so most shifts are infeasible and must be redrawn
    occ = np.zeros((8, 8), dtype=bool)
    occ[0:5, 2] = True
    occ[2, 2:5] = True
    sample = _sample(occ, np.ones((8, 8)) * 0.5, (1.0, 1.0), (6.0, 6.0))
    outputs = augment_sample(sample, AugmentParams(maps_to_generate=20), make_rng(9))
    assert len(outputs) == 20
    for out in outputs:
        assert out.grid.is_free(out.query.start.x, out.query.start.y)
        assert out.grid.is_free(out.query.goal.x, out.query.goal.y)


def test_augmentation_error_after_exhausted_retries(monkeypatch):
    hopeless = Transform(dx=50, dy=0, quarter_turns=0, shear=0.0, brightness=1.0)
    monkeypatch.setattr(augment_module, "draw_transform", lambda *a, **k: hopeless)
    with pytest.raises(AugmentationError):
        augment_sample(_basic_sample(), AugmentParams(maps_to_generate=1), make_rng(0))


def test_non_square_rotations_preserve_dimensions():
    occ = np.zeros((6, 10), dtype=bool)
    sample = _sample(occ, np.ones((6, 10)), (2.5, 2.5), (7.5, 3.5))
    params = AugmentParams(height_shift=0, width_shift=0, shift_step=0,
                           rotation_probability=1.0, maps_to_generate=40)
    turns = set()
    for out, transform in augment_sample_detailed(sample, params, make_rng(1)):
        assert (out.grid.width, out.grid.height) == (10, 6)
        turns.add(transform.quarter_turns)
    assert turns == {0, 2}


def test_square_rotations_use_all_quarter_turns():
    occ = np.zeros((10, 10), dtype=bool)
    sample = _sample(occ, np.ones((10, 10)), (4.5, 4.5), (6.5, 6.5))
    params = AugmentParams(height_shift=0, width_shift=0, shift_step=0,
                           rotation_probability=1.0, maps_to_generate=60)
    turns = {t.quarter_turns for _, t in augment_sample_detailed(sample, params, make_rng(2))}
    assert turns == {0, 1, 2, 3}


def test_shear_touches_region_only():
    occ = np.zeros((5, 5), dtype=bool)
    occ[2, 2] = True
    w = np.zeros((5, 5))
    w[:, 1] = 0.8
    sample = _sample(occ, w, (0.5, 0.5), (4.5, 4.5))
    out = shear_region(sample, 45.0)
    assert np.array_equal(out.grid.occupancy, occ)
    assert out.query == sample.query
    # 45 degrees about row 2: row r shifts by r - 2 columns
    expected_cols = {0: -1, 1: 0, 2: 1, 3: 2, 4: 3}
    for row, col in expected_cols.items():
        if 0 <= col < 5:
            assert out.region.weight[row, col] == 0.8
    assert out.region.weight[0, 1] == 0.0


def test_shear_zero_is_identity():
    sample = _basic_sample()
    out = shear_region(sample, 0.0)
    assert np.array_equal(out.region.weight, sample.region.weight)


def test_brightness_scales_and_clips_region():
    w = np.array([[0.2, 0.6], [0.0, 1.0]])
    sample = _sample(np.zeros((2, 2), bool), w, (0.5, 0.5), (1.5, 1.5), goal_radius=1.0)
    out = brighten_region(sample, 2.0)
    assert out.region.weight.tolist() == [[0.4, 1.0], [0.0, 1.0]]
    assert np.array_equal(out.grid.occupancy, sample.grid.occupancy)
    dim = brighten_region(sample, 0.5)
    assert dim.region.weight.tolist() == [[0.1, 0.3], [0.0, 0.5]]


def test_draw_transform_respects_shift_quantization():
    params = AugmentParams(width_shift=3, height_shift=3, shift_step=2,
                           rotation_probability=0.0, maps_to_generate=1)
    rng = make_rng(5)
    seen = set()
    for _ in range(200):
        t = draw_transform(params, rng, square=True)
        seen.add((t.dx, t.dy))
        assert t.dx in (-2, 0, 2) and t.dy in (-2, 0, 2)
    assert len(seen) == 9
