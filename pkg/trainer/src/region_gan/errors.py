"""Error types raised by the trainer."""


class ConfigError(ValueError):
    """A configuration value or key is invalid."""


class TrainingDivergedError(RuntimeError):
    """A loss became non-finite; carries the last step's loss record."""

    def __init__(self, message: str, record: dict[str, float]):
        super().__init__(message)
        self.record = record
