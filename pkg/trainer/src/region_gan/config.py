"""Training hyperparameters and the key=value config file format.

A config file is plain text, one ``key = value`` pair per line; ``#`` starts
a comment.  Keys are routed to whichever of TrainConfig, LossWeights, or
NetConfig declares a field of that name, so one file configures the whole
run.
"""

import dataclasses
from dataclasses import dataclass

from .errors import ConfigError
from .losses import BCE_MODES, LossWeights
from .networks import NetConfig

OPTIMIZERS = ("adam", "sgd")
SCHEDULERS = ("none", "exponential", "plateau")


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer and loop settings; the Adam variant is the default."""

    batch_size: int = 8
    epochs: int = 20
    lr_g: float = 1e-4
    lr_d_map: float = 5e-5
    lr_d_point: float = 5e-5
    beta1: float = 0.5
    beta2: float = 0.999
    weight_decay: float = 5e-4
    momentum: float = 0.9
    optimizer: str = "adam"
    scheduler: str = "none"
    gamma: float = 0.1
    decay_boundaries: tuple[int, ...] = ()
    bce_mode: str = "pixelwise"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        for name in ("lr_g", "lr_d_map", "lr_d_point", "gamma"):
            if not getattr(self, name) >= 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"optimizer must be one of {OPTIMIZERS}, "
                              f"got {self.optimizer!r}")
        if self.scheduler not in SCHEDULERS:
            raise ConfigError(f"scheduler must be one of {SCHEDULERS}, "
                              f"got {self.scheduler!r}")
        if self.bce_mode not in BCE_MODES:
            raise ConfigError(f"bce_mode must be one of {BCE_MODES}, "
                              f"got {self.bce_mode!r}")


def _coerce(raw: str, kind, key: str):
    raw = raw.strip()
    try:
        if kind is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw
        if kind == tuple[int, ...]:
            return tuple(int(part) for part in raw.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc
    raise ConfigError(f"{key}: unsupported field type {kind}")


def parse_config(text: str) -> tuple[TrainConfig, LossWeights, NetConfig]:
    """Parse key=value text into the three config dataclasses."""
    fields = {}
    for cls in (TrainConfig, LossWeights, NetConfig):
        for field in dataclasses.fields(cls):
            fields[field.name] = (cls, field.type)
    values: dict[type, dict] = {TrainConfig: {}, LossWeights: {}, NetConfig: {}}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in fields:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        cls, kind = fields[key]
        if isinstance(kind, str):
            kind = {"int": int, "float": float, "str": str, "bool": bool,
                    "tuple[int, ...]": tuple[int, ...]}[kind]
        values[cls][key] = _coerce(raw, kind, key)
    try:
        return (TrainConfig(**values[TrainConfig]),
                LossWeights(**values[LossWeights]),
                NetConfig(**values[NetConfig]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def format_config(train: TrainConfig, weights: LossWeights,
                  net: NetConfig) -> str:
    """Render the three configs back to key=value text."""
    lines = []
    for obj in (train, weights, net):
        for field in dataclasses.fields(obj):
            value = getattr(obj, field.name)
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            lines.append(f"{field.name} = {value}")
    return "\n".join(lines) + "\n"
