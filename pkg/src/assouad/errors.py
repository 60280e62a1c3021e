"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
  2 -> domain / precondition / structural errors
  3 -> precision / calibration / construction-infeasibility errors
  4 -> inconclusive classification
"""


class AssouadError(Exception):
    """Base class for all library errors."""


class DomainError(AssouadError):
    """A parameter is outside its documented range, or a precondition fails."""


class StructureError(AssouadError):
    """Two objects that must share structure (e.g. the same tree) do not."""


class PrecisionError(AssouadError):
    """A query cannot be resolved at the requested precision.

    ``achievable`` carries the tightest bound that *can* be certified.
    """

    def __init__(self, message, achievable=None):
        super().__init__(message)
        self.achievable = achievable


class ConstructionError(AssouadError):
    """Cube-tree construction failed (length-window packing or margins)."""


class CalibrationError(AssouadError):
    """A weight or subdivision-ratio constraint cannot be satisfied."""


class InconclusiveError(AssouadError):
    """The audited range is too short to separate classifier cases."""
