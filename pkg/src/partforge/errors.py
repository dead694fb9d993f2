"""Exception hierarchy shared by all partforge modules."""

from __future__ import annotations


class PartForgeError(Exception):
    """Base class for every error raised by this package."""


# --- asset model / IO ---------------------------------------------------


class MissingManifestError(PartForgeError):
    pass


class MalformedMeshError(PartForgeError):
    def __init__(self, part_name: str, reason: str = ""):
        self.part_name = part_name
        self.reason = reason
        super().__init__(f"malformed mesh for part {part_name!r}: {reason}")


class IndexOutOfRangeError(PartForgeError):
    def __init__(self, part_name: str = "", detail: str = ""):
        self.part_name = part_name
        super().__init__(
            f"face index out of range{' in part ' + repr(part_name) if part_name else ''}"
            f"{': ' + detail if detail else ''}"
        )


class IoFailureError(PartForgeError):
    pass


# --- geometry ------------------------------------------------------------


class ZeroExtentError(PartForgeError):
    pass


class DegenerateInputError(PartForgeError):
    pass


class NoSurfaceError(PartForgeError):
    pass


class VisibilityExhaustedError(PartForgeError):
    pass


# --- rendering -----------------------------------------------------------


class EmptyRenderError(PartForgeError):
    pass


# --- VLM annotation ------------------------------------------------------


class WrongViewCountError(PartForgeError):
    pass


class UnparseableResponseError(PartForgeError):
    pass


class MissingFieldError(PartForgeError):
    def __init__(self, field: str):
        self.field = field
        super().__init__(f"missing required field {field!r}")


class InvalidTierError(PartForgeError):
    pass


class EmptyClusteringError(PartForgeError):
    pass


class VlmError(PartForgeError):
    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


# --- flow / evaluation ---------------------------------------------------


class ShapeMismatchError(PartForgeError):
    pass


class TargetNotInSchemaError(PartForgeError):
    pass


class EmptyCloudError(PartForgeError):
    pass


class InsufficientPointsError(PartForgeError):
    pass


# --- configuration -------------------------------------------------------


class ConfigError(PartForgeError):
    pass


class ConfigParseError(ConfigError):
    pass


class UnknownConfigKeyError(ConfigError):
    pass


class InvalidConfigValueError(ConfigError):
    pass
