"""Frechet distance tests: closed forms, symmetry, and moment validation."""

import numpy as np
import pytest

from region_gan import (
    MomentPair,
    default_features,
    fid,
    fid_from_images,
    moment_pair,
)


def _random_psd(rng, dim):
    m = rng.standard_normal((dim, dim))
    return m @ m.T + 0.1 * np.eye(dim)


def _random_pair(rng, dim):
    return MomentPair(rng.standard_normal(dim), _random_psd(rng, dim))


def test_moment_pair_validation():
    with pytest.raises(ValueError, match="symmetric"):
        MomentPair(np.zeros(2), np.array([[1.0, 0.5], [0.2, 1.0]]))
    with pytest.raises(ValueError, match="definite"):
        MomentPair(np.zeros(2), np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(ValueError, match="need mean"):
        MomentPair(np.zeros(3), np.eye(2))
    with pytest.raises(ValueError, match="finite"):
        MomentPair(np.array([np.nan, 0.0]), np.eye(2))


def test_moment_pair_from_features_matches_numpy():
    rng = np.random.default_rng(30)
    feats = rng.standard_normal((50, 6))
    pair = moment_pair(feats)
    assert np.allclose(pair.mean, feats.mean(axis=0))
    assert np.allclose(pair.covariance, np.cov(feats, rowvar=False))
    with pytest.raises(ValueError, match="at least 2"):
        moment_pair(feats[:1])


def test_fid_identical_moments_is_zero():
    rng = np.random.default_rng(31)
    for dim in (2, 5, 16):
        pair = _random_pair(rng, dim)
        assert abs(fid(pair, pair)) <= 1e-6


def test_fid_one_dimensional_closed_form():
    # N(0,1) vs N(1,1): distance is the squared mean gap
    a = MomentPair(np.zeros(1), np.ones((1, 1)))
    b = MomentPair(np.ones(1), np.ones((1, 1)))
    assert abs(fid(a, b) - 1.0) <= 1e-9


def test_fid_two_dimensional_diagonal_closed_form():
    # diag(1,4) vs diag(4,1): trace term gives 2*(2-1)^2 = 2
    a = MomentPair(np.zeros(2), np.diag([1.0, 4.0]))
    b = MomentPair(np.zeros(2), np.diag([4.0, 1.0]))
    assert abs(fid(a, b) - 2.0) <= 1e-9


def test_fid_symmetry_and_nonnegativity():
    rng = np.random.default_rng(32)
    for _ in range(10):
        a = _random_pair(rng, 4)
        b = _random_pair(rng, 4)
        forward = fid(a, b)
        assert forward >= 0.0
        assert abs(forward - fid(b, a)) <= 1e-8


def test_fid_mean_shift_only():
    rng = np.random.default_rng(33)
    cov = _random_psd(rng, 3)
    shift = rng.standard_normal(3)
    a = MomentPair(np.zeros(3), cov)
    b = MomentPair(shift, cov)
    assert abs(fid(a, b) - float(shift @ shift)) <= 1e-8


def test_fid_dimension_mismatch():
    a = MomentPair(np.zeros(2), np.eye(2))
    b = MomentPair(np.zeros(3), np.eye(3))
    with pytest.raises(ValueError, match="dimension"):
        fid(a, b)


def test_default_features_shape_and_pooling():
    rng = np.random.default_rng(34)
    images = rng.random((5, 3, 16, 16))
    feats = default_features(images)
    assert feats.shape == (5, 64)
    constant = np.full((2, 3, 8, 8), 0.25)
    assert np.allclose(default_features(constant), 0.25)
    with pytest.raises(ValueError, match="divisible"):
        default_features(rng.random((1, 3, 12, 12)))


def test_fid_from_identical_image_sets():
    rng = np.random.default_rng(35)
    images = rng.random((8, 3, 16, 16))
    assert abs(fid_from_images(images, images.copy())) <= 1e-6
