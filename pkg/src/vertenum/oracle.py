"""Brute-force ground truth, kept independent of the recursion it checks.

Vertices come from support enumeration: every linearly independent
column subset B gives at most one basic solution of S_B x_B = b, and
the nonnegative ones, padded with zeros, are exactly the vertices of a
pointed polyhedron. The module checker applies the defining kernel
condition literally. Both use only the shared rational-matrix
primitives, nothing from the LP or face machinery.
"""

from __future__ import annotations

from itertools import combinations
from collections.abc import Iterable

from . import ratmat
from .faceenum import VertexSet
from .kmodule import PolyhedronSpec
from .ratmat import RationalMatrix, ZERO


def brute_force_vertices(poly: PolyhedronSpec, cap: int = 16) -> VertexSet:
    """All vertices of P = {Sx = b, x >= 0}, by exhaustive support search.

    Exponential in the column count, hence the cap. P in this standard
    form is always pointed, so basic feasible solutions and vertices
    coincide.
    """
    columns = poly.columns
    if len(columns) > cap:
        raise ValueError(f"brute force capped at {cap} columns, got {len(columns)}")
    max_size = ratmat.rank(poly.matrix)
    points = set()
    for size in range(max_size + 1):
        for support in combinations(columns, size):
            sub = poly.matrix.columns(support)
            if ratmat.rank(sub) != size:
                continue
            solution = ratmat.solve_exact(sub, poly.rhs)
            if solution is None:
                continue
            if any(solution[c] < 0 for c in support):
                continue
            point = tuple(solution.get(c, ZERO) if c in support else ZERO for c in columns)
            points.add(point)
    return VertexSet(tuple(columns), frozenset(points))


def definitional_k_module_check(matrix: RationalMatrix, subset: Iterable[str], k: int) -> bool:
    """The k-module definition applied literally to ker(matrix).

    Builds a kernel basis, collects the images S_A w_A, and checks their
    span has dimension at most k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    names = frozenset(subset)
    extra = names - set(matrix.col_names)
    if extra:
        raise KeyError(f"not columns: {sorted(extra)}")
    active = [c for c in matrix.col_names if c in names]
    kernel = ratmat.kernel_basis(matrix)
    sub = matrix.columns(active)
    images = []
    for wname in kernel.col_names:
        image = sub.matvec({c: kernel.entry(c, wname) for c in active})
        images.append([image[r] for r in matrix.row_names])
    stacked = RationalMatrix(
        matrix.row_names,
        tuple(f"u{i + 1}" for i in range(len(images))),
        [[img[i] for img in images] for i in range(len(matrix.row_names))],
    )
    return ratmat.rank(stacked) <= k
