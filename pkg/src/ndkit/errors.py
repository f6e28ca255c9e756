"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Shape of an argument is incompatible with the requested operation."""


class BroadcastError(ShapeError):
    """Operand shapes cannot be broadcast together."""


class ReadOnlyError(ValueError):
    """Write attempted through a read-only view."""


class ReductionError(ValueError):
    """Reduction is undefined for the given operands (e.g. max of nothing)."""


class DispatchError(NotImplementedError):
    """A foreign backend is present but does not handle the function."""


class ChunkLayoutError(ValueError):
    """Chunked operands do not share the same chunk layout."""


class FormatError(ValueError):
    """A byte stream does not parse as a valid .ndar container."""


class TableError(RuntimeError):
    """Sampling-table construction failed its own consistency checks."""
