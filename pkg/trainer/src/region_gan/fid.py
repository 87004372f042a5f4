"""Frechet distance between Gaussian moment summaries of feature sets.

The feature extractor is pluggable; the default collapses images to 64
raw-pixel features by channel-averaging and 8x8 average pooling, so the
tested quantity is the moment math, not perceptual fidelity.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

SYMMETRY_TOL = 1e-8
EIGEN_TOL = 1e-8


@dataclass(frozen=True)
class MomentPair:
    """Mean vector and covariance matrix of a feature distribution."""

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=np.float64)
        cov = np.asarray(self.covariance, dtype=np.float64)
        if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"need mean (d,) and covariance (d, d), got "
                f"{mean.shape} and {cov.shape}")
        if not np.isfinite(mean).all() or not np.isfinite(cov).all():
            raise ValueError("moments must be finite")
        if np.abs(cov - cov.T).max() > SYMMETRY_TOL:
            raise ValueError("covariance is not symmetric")
        if np.linalg.eigvalsh(cov).min() < -EIGEN_TOL:
            raise ValueError("covariance is not positive semidefinite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", (cov + cov.T) / 2.0)


def moment_pair(features: np.ndarray) -> MomentPair:
    """Sample mean and covariance of an (n, d) feature matrix, n >= 2."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 2:
        raise ValueError(
            f"need at least 2 feature rows of equal length, got shape "
            f"{features.shape}")
    return MomentPair(features.mean(axis=0), np.cov(features, rowvar=False))


def _sqrt_psd(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(matrix)
    values = np.clip(values, 0.0, None)
    return (vectors * np.sqrt(values)) @ vectors.T


def fid(r: MomentPair, f: MomentPair) -> float:
    """||m_r - m_f||^2 + Tr(S_r + S_f - 2 (S_r S_f)^(1/2)).

    The product square root comes from the eigendecomposition of the
    symmetrized product A S_f A with A = S_r^(1/2); eigenvalues above
    -1e-8 are clipped to zero before the square root.
    """
    if r.mean.size != f.mean.size:
        raise ValueError(
            f"dimension mismatch: {r.mean.size} vs {f.mean.size}")
    root_r = _sqrt_psd(r.covariance)
    inner = root_r @ f.covariance @ root_r
    inner = (inner + inner.T) / 2.0
    values = np.linalg.eigh(inner)[0]
    values = np.clip(values, 0.0, None)
    trace_sqrt = np.sqrt(values).sum()
    delta = r.mean - f.mean
    value = float(delta @ delta + np.trace(r.covariance)
                  + np.trace(f.covariance) - 2.0 * trace_sqrt)
    return max(value, 0.0)


def default_features(images: np.ndarray) -> np.ndarray:
    """(n, c, h, w) images to (n, 64) features: channel mean, 8x8 pooling."""
    images = np.asarray(images, dtype=np.float64)
    if images.ndim != 4:
        raise ValueError(f"need (n, c, h, w) images, got shape {images.shape}")
    n, _, h, w = images.shape
    if h % 8 or w % 8:
        raise ValueError(f"image size {h}x{w} is not divisible by 8")
    gray = images.mean(axis=1)
    pooled = gray.reshape(n, 8, h // 8, 8, w // 8).mean(axis=(2, 4))
    return pooled.reshape(n, 64)


def fid_from_images(real: np.ndarray, fake: np.ndarray,
                    extractor: Callable[[np.ndarray], np.ndarray]
                    = default_features) -> float:
    """FID between two image stacks under the given feature extractor."""
    return fid(moment_pair(extractor(real)), moment_pair(extractor(fake)))
