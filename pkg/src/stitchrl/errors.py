"""Exception hierarchy shared across the package.

Every failure mode that callers are expected to handle gets its own class so
the CLI can map them onto distinct exit codes.
"""


class StitchError(Exception):
    """Base class for all package errors."""


class ShapeError(StitchError):
    """Tensor or layer dimension mismatch; message names the offending part."""


class ContractViolationError(StitchError):
    """An operation was called outside its contract (e.g. non-scalar loss)."""


class TrainingDivergenceError(StitchError):
    """Loss blew up or a gradient went non-finite during training."""

    def __init__(self, message: str, phase: str = ""):
        super().__init__(message)
        self.phase = phase


class EpisodeCompleteError(StitchError):
    """step() was called on an episode that already finished."""


class UnsupportedBackendError(StitchError):
    """Operation requested on an environment backend that cannot serve it."""


class ConfigError(StitchError):
    """Invalid or inconsistent configuration values."""


class DataFormatError(StitchError):
    """Malformed serialized artifact; carries the offending line if known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class VersionError(DataFormatError):
    """Serialized artifact written by an incompatible format version."""


class GenerationError(StitchError):
    """A scripted controller failed to produce the trajectory it promised."""
