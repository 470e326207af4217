"""Exception types shared across the package."""


class EmptyPolyhedronError(ValueError):
    """Raised when an operation requires a nonempty feasible region."""


class UnboundedPolyhedronError(ValueError):
    """Raised when an operation requires a bounded polyhedron."""


class DecompositionError(ValueError):
    """Raised for malformed branch decompositions or decomposition files."""


class PolyhedronFormatError(ValueError):
    """Raised when a polyhedron input file cannot be parsed."""
