"""Exception hierarchy shared across the toolkit."""


class PinkeyError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedModeError(PinkeyError):
    """Operation needs exact rational weights but the model is float-mode."""


class InvalidScaleError(PinkeyError, ValueError):
    """Blocklength is not a positive multiple of the model's base scale."""


class SizeLimitError(PinkeyError):
    """Instance exceeds a documented enumeration cap."""


class InvalidAssignmentError(PinkeyError, ValueError):
    """Subset weights violate the per-terminal sum-to-one constraint."""


class InvalidTreeError(PinkeyError, ValueError):
    """Edge list does not form a tree."""


class InvalidPackingError(PinkeyError, ValueError):
    """Trees are not edge-disjoint, do not cover the target set, or do not
    fit the multigraph."""


class AuditFailureError(PinkeyError):
    """A protocol run failed key recovery or leaked into the transcript."""


class ModelFormatError(PinkeyError, ValueError):
    """Model file violates the documented schema."""
