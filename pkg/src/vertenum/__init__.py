"""Exact vertex enumeration for polytopes {x : Sx = b, x >= 0}.

The pipeline: split off constant coordinates, build a branch
decomposition of the column matroid, root it into a binary family of
low-interface modules, and merge minimal feasible faces bottom-up until
the root faces name the vertices. Everything is exact rational
arithmetic; a brute-force oracle provides an independent cross-check.
"""

from .errors import (
    DecompositionError,
    EmptyPolyhedronError,
    PolyhedronFormatError,
    UnboundedPolyhedronError,
)
from .ratmat import Rational, RationalMatrix, kernel_basis, rank, rat, rat_str, solve_exact
from .lp import (
    FeasibleRegion,
    LpOutcome,
    LpProblem,
    LpStatus,
    coordinate_range,
    coordinate_ranges,
    face_feasible,
    solve,
)
from .matroid import LinearMatroid
from .kmodule import (
    ModuleInterface,
    PolyhedronSpec,
    interface,
    interface_dim,
    is_k_module,
    kernel_image_dim,
    reduce,
    variable_set,
)
from .branchdec import (
    BranchDecomposition,
    ModTree,
    decompose,
    format_decomposition,
    parse_decomposition,
    to_mod_family,
    width_of,
)
from .faceenum import (
    EnumerationRun,
    Face,
    VertexSet,
    enumerate_vertices,
    face_dimension,
    is_minimal,
    leaf_faces,
    merge,
    run_enumeration,
)
from .oracle import brute_force_vertices, definitional_k_module_check

__version__ = "0.1.0"

__all__ = [
    "BranchDecomposition",
    "DecompositionError",
    "EmptyPolyhedronError",
    "EnumerationRun",
    "Face",
    "FeasibleRegion",
    "LinearMatroid",
    "LpOutcome",
    "LpProblem",
    "LpStatus",
    "ModTree",
    "ModuleInterface",
    "PolyhedronFormatError",
    "PolyhedronSpec",
    "Rational",
    "RationalMatrix",
    "UnboundedPolyhedronError",
    "VertexSet",
    "brute_force_vertices",
    "coordinate_range",
    "coordinate_ranges",
    "decompose",
    "definitional_k_module_check",
    "enumerate_vertices",
    "face_dimension",
    "face_feasible",
    "format_decomposition",
    "interface",
    "interface_dim",
    "is_k_module",
    "is_minimal",
    "kernel_basis",
    "kernel_image_dim",
    "leaf_faces",
    "merge",
    "parse_decomposition",
    "rank",
    "rat",
    "rat_str",
    "reduce",
    "run_enumeration",
    "solve",
    "solve_exact",
    "to_mod_family",
    "variable_set",
    "width_of",
]
