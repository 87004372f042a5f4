"""Attention-gated conditional GAN for learning promising-region maps."""

from .config import (
    OPTIMIZERS,
    SCHEDULERS,
    TrainConfig,
    format_config,
    parse_config,
)
from .data import Scene, make_scene, synthetic_batch
from .errors import ConfigError, TrainingDivergedError
from .export import export_heuristic, export_map, quantize, write_p5
from .fid import (
    MomentPair,
    default_features,
    fid,
    fid_from_images,
    moment_pair,
)
from .losses import (
    BCE_MODES,
    EPSILON,
    LossWeights,
    adversarial_term,
    bce_xy,
    d_loss,
    d_map_loss,
    d_point_loss,
    dice_loss,
    generator_loss,
    iou_loss,
    mse_loss,
    total_supervised,
)
from .networks import (
    CBAM,
    ChannelAttention,
    ConvBlock,
    Discriminator,
    Generator,
    NetConfig,
    ResidualBlock,
    SpatialAttention,
    build_models,
    count_parameters,
    kaiming_init,
)
from .training import (
    METRICS_HEADER,
    evaluate,
    load_checkpoint,
    make_optimizers,
    make_schedulers,
    save_checkpoint,
    train,
    train_step,
)

__version__ = "0.1.0"

__all__ = [
    "BCE_MODES",
    "CBAM",
    "ChannelAttention",
    "ConfigError",
    "ConvBlock",
    "Discriminator",
    "EPSILON",
    "Generator",
    "LossWeights",
    "METRICS_HEADER",
    "MomentPair",
    "NetConfig",
    "OPTIMIZERS",
    "ResidualBlock",
    "SCHEDULERS",
    "Scene",
    "SpatialAttention",
    "TrainConfig",
    "TrainingDivergedError",
    "adversarial_term",
    "bce_xy",
    "build_models",
    "count_parameters",
    "d_loss",
    "d_map_loss",
    "d_point_loss",
    "default_features",
    "dice_loss",
    "evaluate",
    "export_heuristic",
    "export_map",
    "fid",
    "fid_from_images",
    "format_config",
    "generator_loss",
    "iou_loss",
    "kaiming_init",
    "load_checkpoint",
    "make_optimizers",
    "make_scene",
    "make_schedulers",
    "moment_pair",
    "mse_loss",
    "parse_config",
    "quantize",
    "save_checkpoint",
    "synthetic_batch",
    "total_supervised",
    "train",
    "train_step",
    "write_p5",
]
