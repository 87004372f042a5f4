"""Attention-gated encoder/decoder generator and patch discriminators.

All modules run on (B, C, H, W) tensors and also accept unbatched (C, H, W)
input, which torch's conv and norm layers treat as a single sample.  The
attention block applies a channel gate then a spatial gate; either branch can
be toggled off independently, and with both off the block is the identity.
"""

from dataclasses import dataclass

import torch
from torch import nn

from .errors import ConfigError


@dataclass(frozen=True)
class NetConfig:
    """Channel counts and switches for the generator and discriminators."""

    ca_reduction: int = 16
    sa_kernel: int = 7
    map_in: int = 3
    point_in: int = 3
    noise_in: int = 1
    hidden: int = 64
    out_channels: int = 3
    disc_hidden: int = 64
    residual_channels: int = 128
    residual_blocks: int = 2
    depth: int = 4
    image_size: int = 256
    spatial: bool = True
    channel: bool = True

    def __post_init__(self) -> None:
        for name in ("ca_reduction", "sa_kernel", "map_in", "point_in",
                     "noise_in", "hidden", "out_channels", "disc_hidden",
                     "residual_channels", "residual_blocks", "depth",
                     "image_size"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.image_size % 2 ** self.depth != 0:
            raise ConfigError(
                f"image_size {self.image_size} is not divisible by "
                f"2^depth = {2 ** self.depth}")


class ConvBlock(nn.Module):
    """Convolution plus optional normalization and activation.

    The raw convolution is exposed as ``.conv`` so its output can be compared
    against a sliding-window oracle before any activation runs.
    """

    def __init__(self, in_channels: int, out_channels: int, kernel: int,
                 stride: int = 1, padding: int = 0, norm: bool = False,
                 activation: str | None = None, transposed: bool = False):
        super().__init__()
        conv_cls = nn.ConvTranspose2d if transposed else nn.Conv2d
        self.conv = conv_cls(in_channels, out_channels, kernel,
                             stride=stride, padding=padding)
        self.norm = nn.InstanceNorm2d(out_channels, affine=True) if norm else None
        if activation is None:
            self.activation = None
        elif activation == "leaky":
            self.activation = nn.LeakyReLU(0.2)
        elif activation == "relu":
            self.activation = nn.ReLU()
        elif activation == "sigmoid":
            self.activation = nn.Sigmoid()
        else:
            raise ConfigError(f"unknown activation {activation!r}")

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.conv(x)
        if self.norm is not None:
            x = self.norm(x)
        if self.activation is not None:
            x = self.activation(x)
        return x


class SpatialAttention(nn.Module):
    """Per-location sigmoid gate: sigmoid(W2(relu(W1(x)))) with 1x1 convs.

    The gate has one channel and the input's height and width; the module
    output is the input scaled by the gate, broadcast over channels.
    """

    def __init__(self, channels: int, reduction: int = 16):
        super().__init__()
        squeezed = max(channels // reduction, 1)
        self.w1 = nn.Conv2d(channels, squeezed, 1)
        self.w2 = nn.Conv2d(squeezed, 1, 1)

    def gate(self, x: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.w2(torch.relu(self.w1(x))))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x * self.gate(x)


class ChannelAttention(nn.Module):
    """Per-channel sigmoid gate from globally average-pooled features."""

    def __init__(self, channels: int, reduction: int = 16):
        super().__init__()
        if channels < reduction:
            raise ConfigError(
                f"channel attention needs channels >= reduction, "
                f"got {channels} < {reduction}")
        self.w1 = nn.Conv2d(channels, channels // reduction, 1)
        self.w2 = nn.Conv2d(channels // reduction, channels, 1)

    def gate(self, x: torch.Tensor) -> torch.Tensor:
        pooled = x.mean(dim=(-2, -1), keepdim=True)
        return torch.sigmoid(self.w2(torch.relu(self.w1(pooled))))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x * self.gate(x)


class CBAM(nn.Module):
    """Channel-then-spatial attention with independent branch toggles.

    With both toggles off the block returns its input unchanged, so ablation
    rows that disable attention degrade to a plain pass-through.
    """

    def __init__(self, channels: int, config: NetConfig):
        super().__init__()
        self.channel = (ChannelAttention(channels, config.ca_reduction)
                        if config.channel else None)
        self.spatial = (SpatialAttention(channels, config.ca_reduction)
                        if config.spatial else None)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if self.channel is not None:
            x = self.channel(x)
        if self.spatial is not None:
            x = self.spatial(x)
        return x


class ResidualBlock(nn.Module):
    """Two 3x3 conv blocks with an identity shortcut."""

    def __init__(self, channels: int):
        super().__init__()
        self.body = nn.Sequential(
            ConvBlock(channels, channels, 3, padding=1, norm=True, activation="relu"),
            ConvBlock(channels, channels, 3, padding=1, norm=True),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.body(x)


def _encoder_channels(config: NetConfig) -> list[int]:
    total_in = config.map_in + config.point_in + config.noise_in
    chans = [total_in]
    for i in range(config.depth):
        chans.append(min(config.hidden * 2 ** i, config.residual_channels))
    return chans


class Generator(nn.Module):
    """Conditional region generator: map + query points + noise in, a
    3-channel probability raster out.

    Stride-2 encoder blocks halve the raster ``depth`` times, residual blocks
    and the attention block transform the bottleneck, and transposed-conv
    decoder blocks mirror the encoder back up to a sigmoid output in (0, 1).
    """

    def __init__(self, config: NetConfig):
        super().__init__()
        self.config = config
        chans = _encoder_channels(config)
        self.encoder = nn.Sequential(*(
            ConvBlock(chans[i], chans[i + 1], 4, stride=2, padding=1,
                      norm=i > 0, activation="leaky")
            for i in range(config.depth)
        ))
        bottleneck = chans[-1]
        self.residual = nn.Sequential(*(
            ResidualBlock(bottleneck) for _ in range(config.residual_blocks)
        ))
        self.attention = CBAM(bottleneck, config)
        decoder = []
        for i in range(config.depth):
            last = i == config.depth - 1
            decoder.append(ConvBlock(
                chans[config.depth - i],
                config.out_channels if last else chans[config.depth - 1 - i],
                4, stride=2, padding=1, norm=not last,
                activation="sigmoid" if last else "relu", transposed=True,
            ))
        self.decoder = nn.Sequential(*decoder)

    def forward(self, grid: torch.Tensor, points: torch.Tensor,
                noise: torch.Tensor) -> torch.Tensor:
        for name, tensor, want in (("map", grid, self.config.map_in),
                                   ("points", points, self.config.point_in),
                                   ("noise", noise, self.config.noise_in)):
            if tensor.shape[-3] != want:
                raise ValueError(
                    f"{name} input must have {want} channels, "
                    f"got {tensor.shape[-3]}")
            if tensor.shape[-2:] != grid.shape[-2:]:
                raise ValueError(
                    f"{name} input is {tuple(tensor.shape[-2:])}, "
                    f"expected {tuple(grid.shape[-2:])}")
        x = torch.cat([grid, points, noise], dim=-3)
        x = self.encoder(x)
        x = self.residual(x)
        x = self.attention(x)
        return self.decoder(x)


class Discriminator(nn.Module):
    """Patch discriminator over a conditioning raster and a candidate region.

    The two 3-channel inputs are concatenated and convolved down to a
    1-channel score map with values in (0, 1).  The map and point
    discriminators are two instances of this one architecture that differ
    only in what conditioning raster they are fed.
    """

    def __init__(self, config: NetConfig):
        super().__init__()
        h = config.disc_hidden
        self.net = nn.Sequential(
            ConvBlock(config.map_in + config.out_channels, h, 4,
                      stride=2, padding=1, activation="leaky"),
            ConvBlock(h, 2 * h, 4, stride=2, padding=1, norm=True,
                      activation="leaky"),
            ConvBlock(2 * h, 2 * h, 4, stride=1, padding=1, norm=True,
                      activation="leaky"),
            ConvBlock(2 * h, 1, 4, stride=1, padding=1, activation="sigmoid"),
        )

    def forward(self, conditioning: torch.Tensor,
                roi: torch.Tensor) -> torch.Tensor:
        if conditioning.shape[-2:] != roi.shape[-2:]:
            raise ValueError(
                f"conditioning is {tuple(conditioning.shape[-2:])}, "
                f"roi is {tuple(roi.shape[-2:])}")
        return self.net(torch.cat([conditioning, roi], dim=-3))


def kaiming_init(module: nn.Module) -> None:
    """Kaiming-normal weights and zero biases on every conv layer."""
    if isinstance(module, (nn.Conv2d, nn.ConvTranspose2d)):
        nn.init.kaiming_normal_(module.weight, a=0.2,
                                nonlinearity="leaky_relu")
        if module.bias is not None:
            nn.init.zeros_(module.bias)


def build_models(config: NetConfig, seed: int = 0
                 ) -> tuple[Generator, Discriminator, Discriminator]:
    """Seeded construction of the generator and both discriminators."""
    torch.manual_seed(seed)
    generator = Generator(config)
    d_map = Discriminator(config)
    d_point = Discriminator(config)
    for model in (generator, d_map, d_point):
        model.apply(kaiming_init)
    return generator, d_map, d_point


def count_parameters(module: nn.Module) -> int:
    """Total trainable parameter count, for reporting."""
    return sum(p.numel() for p in module.parameters() if p.requires_grad)
