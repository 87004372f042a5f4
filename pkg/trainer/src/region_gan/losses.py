"""Loss stack for the region GAN, all descent-oriented and nonnegative.

The printed loss definitions mix max and min forms; everything here is
arranged so gradient descent minimizes it.  Probabilities are clamped to
[EPSILON, 1 - EPSILON] before any log.

``bce_xy`` evaluates either per pixel (default, the robust reading) or on
axis-wise projections, where a raster's x-profile is its per-column mean and
its y-profile its per-row mean; the overlap loss always uses the profiles.
"""

from dataclasses import dataclass

import torch

EPSILON = 1e-7
BCE_MODES = ("pixelwise", "axiswise")


@dataclass(frozen=True)
class LossWeights:
    """Scale factors for the individual loss terms.

    ``gen_alpha`` and ``adaptive_cbam_alpha`` are accepted for config
    compatibility but unused by the default objective.
    """

    dice_alpha: float = 10.0
    dice_smooth: float = 1.0
    iou_alpha: float = 10.0
    iou_smooth: float = 1.0
    mse_alpha: float = 20.0
    gen_alpha: float = 100.0
    cbam_gen_alpha: float = 1.0
    cbam_gen_beta: float = 1.0
    adaptive_cbam_alpha: float = 3.0

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")


def _check_pair(p: torch.Tensor, p_hat: torch.Tensor) -> None:
    if p.shape != p_hat.shape:
        raise ValueError(f"shape mismatch: {tuple(p.shape)} vs {tuple(p_hat.shape)}")


def _clamp(t: torch.Tensor) -> torch.Tensor:
    return t.clamp(EPSILON, 1.0 - EPSILON)


def _profiles(t: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """(x-profile, y-profile): means over rows and over columns."""
    return t.mean(dim=-2), t.mean(dim=-1)


def _bce(p: torch.Tensor, p_hat: torch.Tensor) -> torch.Tensor:
    p_hat = _clamp(p_hat)
    return -(p * torch.log(p_hat) + (1.0 - p) * torch.log(1.0 - p_hat)).mean()


def bce_xy(p: torch.Tensor, p_hat: torch.Tensor,
           mode: str = "pixelwise") -> torch.Tensor:
    """Binary cross-entropy between probability rasters, mean per entry.

    Axiswise mode scores the x- and y-profiles and returns the sum of the
    two directional terms; pixelwise mode scores the rasters directly.
    """
    _check_pair(p, p_hat)
    if mode not in BCE_MODES:
        raise ValueError(f"mode must be one of {BCE_MODES}, got {mode!r}")
    if mode == "pixelwise":
        return _bce(p, p_hat)
    px, py = _profiles(p)
    qx, qy = _profiles(p_hat)
    return _bce(px, qx) + _bce(py, qy)


def _overlap_terms(p: torch.Tensor, p_hat: torch.Tensor
                   ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
    """Sum of profile products and of squared profiles for both axes."""
    px, py = _profiles(p)
    qx, qy = _profiles(p_hat)
    cross = (px * qx).sum() + (py * qy).sum()
    p_sq = (px * px).sum() + (py * py).sum()
    q_sq = (qx * qx).sum() + (qy * qy).sum()
    return cross, p_sq, q_sq


def dice_loss(p: torch.Tensor, p_hat: torch.Tensor, alpha: float = 10.0,
              smooth: float = 1.0) -> torch.Tensor:
    """Soft overlap loss on the axis profiles: alpha * (1 - dice)."""
    _check_pair(p, p_hat)
    cross, p_sq, q_sq = _overlap_terms(p, p_hat)
    return alpha * (1.0 - (2.0 * cross + smooth) / (p_sq + q_sq + smooth))


def iou_loss(p: torch.Tensor, p_hat: torch.Tensor, alpha: float = 10.0,
             smooth: float = 1.0) -> torch.Tensor:
    """Optional substitute for dice_loss using the IoU form of the overlap."""
    _check_pair(p, p_hat)
    cross, p_sq, q_sq = _overlap_terms(p, p_hat)
    return alpha * (1.0 - (cross + smooth) / (p_sq + q_sq - cross + smooth))


def total_supervised(p: torch.Tensor, p_hat: torch.Tensor,
                     weights: LossWeights | None = None,
                     mode: str = "pixelwise") -> torch.Tensor:
    """Cross-entropy plus the overlap loss; exactly the sum of the parts."""
    weights = weights or LossWeights()
    return bce_xy(p, p_hat, mode) + dice_loss(
        p, p_hat, weights.dice_alpha, weights.dice_smooth)


def mse_loss(pred: torch.Tensor, target: torch.Tensor,
             alpha: float = 20.0) -> torch.Tensor:
    """alpha * mean squared per-element difference."""
    _check_pair(pred, target)
    return alpha * ((pred - target) ** 2).mean()


def _check_scores(scores: torch.Tensor, label: str) -> None:
    if scores.numel() == 0:
        raise ValueError(f"{label} scores are empty")
    if bool((scores < 0.0).any()) or bool((scores > 1.0).any()):
        raise ValueError(f"{label} scores must lie in [0, 1]")


def adversarial_term(scores: torch.Tensor) -> torch.Tensor:
    """Descent form of fooling a discriminator: -mean log score."""
    _check_scores(scores, "fake")
    return -torch.log(_clamp(scores)).mean()


def d_loss(real_scores: torch.Tensor, fake_scores: torch.Tensor,
           p: torch.Tensor, p_hat: torch.Tensor,
           weights: LossWeights | None = None,
           mode: str = "pixelwise") -> torch.Tensor:
    """Discriminator objective: push real scores to 1 and fake scores to 0.

    The supervised term is reported as part of the value but detached, so no
    gradient from it reaches discriminator parameters.
    """
    _check_scores(real_scores, "real")
    _check_scores(fake_scores, "fake")
    adversarial = (-torch.log(_clamp(real_scores)).mean()
                   - torch.log(1.0 - _clamp(fake_scores)).mean())
    return adversarial + total_supervised(p, p_hat, weights, mode).detach()


d_map_loss = d_loss
d_point_loss = d_loss


def generator_loss(fake_map_scores: torch.Tensor,
                   fake_point_scores: torch.Tensor,
                   generated: torch.Tensor, target: torch.Tensor,
                   p: torch.Tensor, p_hat: torch.Tensor,
                   weights: LossWeights | None = None,
                   mode: str = "pixelwise") -> torch.Tensor:
    """Generator objective: fool both discriminators, reconstruct, overlap."""
    weights = weights or LossWeights()
    adversarial = (weights.cbam_gen_alpha * adversarial_term(fake_map_scores)
                   + weights.cbam_gen_beta * adversarial_term(fake_point_scores))
    return (adversarial + mse_loss(generated, target, weights.mse_alpha)
            + total_supervised(p, p_hat, weights, mode))
