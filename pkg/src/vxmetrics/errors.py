"""Exception hierarchy shared by parsers, metrics and statistics."""


class VxmError(Exception):
    """Base class for every error raised by vxmetrics."""


class FormatError(VxmError, ValueError):
    """Malformed input document (bad tag, version, syntax)."""


class LengthError(FormatError):
    """RLE stream does not cover the declared grid volume."""


class PaletteError(FormatError):
    """Palette is not a bijection with contiguous ids."""


class UnknownBlockError(FormatError):
    """Block name or id that does not resolve."""


class CycleError(FormatError):
    """Recipe graph contains a cycle."""

    def __init__(self, message, cycle=()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class RangeError(FormatError):
    """Score outside [0, 10]."""


class BoundsError(VxmError, IndexError):
    """Coordinate or bounding box outside the grid."""


class EmptySettlementError(VxmError, ValueError):
    """The generator placed no blocks."""


class DegenerateError(VxmError, ValueError):
    """Input too sparse or constant for the requested statistic."""


class NoPairsError(DegenerateError):
    """No adjacent non-empty pairs to estimate an entropy from."""


class MissingGeneratorError(VxmError, KeyError):
    """A generator has no records where some were required."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
