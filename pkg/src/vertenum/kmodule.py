"""Polyhedra {x : Sx = b, x >= 0} and their k-module structure.

A column set A is a k-module when the aggregate image S_A x_A stays
inside some k-dimensional affine subspace d + span(D) while x ranges
over the whole feasible set; d is the constant interface and D the
variable interface. Everything reduces to the kernel of S restricted
to the non-constant coordinates Q: A is a k-module of P exactly when
its trace on Q is a (k+1)-separator of the column matroid of S_Q, and
the minimal k is the dimension of {S_A w_A : w in ker(S_Q)}.

The PolyhedronSpec caches (feasible point, coordinate ranges, Q,
kernel, matroid) are each computed once on first use and never mutated
afterwards; warm objects are safe to share across threads.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from . import lp, ratmat
from .errors import EmptyPolyhedronError
from .matroid import LinearMatroid
from .ratmat import ZERO, RationalMatrix, rat


class PolyhedronSpec:
    """The pair (S, b) plus lazily computed structure of P = {Sx = b, x >= 0}."""

    def __init__(self, matrix: RationalMatrix, rhs: Mapping[str, object]):
        self.matrix = matrix
        self.rhs = {r: rat(rhs[r]) for r in matrix.row_names}
        self._region = None
        self._ranges = None
        self._variable_matrix = None
        self._kernel = None
        self._matroid = None

    @property
    def columns(self) -> tuple[str, ...]:
        return self.matrix.col_names

    @property
    def rows(self) -> tuple[str, ...]:
        return self.matrix.row_names

    def with_row(self, name: str, coeffs: Mapping[str, object], value) -> "PolyhedronSpec":
        """New spec with one extra equality row appended."""
        rhs = dict(self.rhs)
        rhs[name] = rat(value)
        return PolyhedronSpec(self.matrix.with_row(name, coeffs), rhs)

    def region(self) -> lp.FeasibleRegion:
        if self._region is None:
            self._region = lp.FeasibleRegion(self.matrix, self.rhs)
        return self._region

    def is_empty(self) -> bool:
        return self.region().is_empty

    def feasible_point(self) -> dict | None:
        """Some feasible point, or None when P is empty."""
        if self.is_empty():
            return None
        return self.region().some_point()

    def ranges(self) -> dict:
        """Exact (min, max) of every coordinate over P; +inf marks unbounded."""
        if self._ranges is None:
            if self.is_empty():
                raise EmptyPolyhedronError("polyhedron is empty")
            self._ranges = lp.coordinate_ranges(self.region(), self.columns)
        return self._ranges

    def variable_set(self) -> frozenset:
        """Q: the coordinates that are not constant over P."""
        return frozenset(c for c, (lo, hi) in self.ranges().items() if lo != hi)

    def is_bounded(self) -> bool:
        return all(hi != lp.POS_INF for _, hi in self.ranges().values())

    def variable_matrix(self) -> RationalMatrix:
        """S_Q, in this matrix's column order."""
        if self._variable_matrix is None:
            self._variable_matrix = self.matrix.restrict_columns(self.variable_set())
        return self._variable_matrix

    def variable_kernel(self) -> RationalMatrix:
        """Basis of ker(S_Q), one column per basis vector."""
        if self._kernel is None:
            self._kernel = ratmat.kernel_basis(self.variable_matrix())
        return self._kernel

    def variable_matroid(self) -> LinearMatroid:
        """The linear matroid on the columns of S_Q."""
        if self._matroid is None:
            self._matroid = LinearMatroid(self.variable_matrix())
        return self._matroid

    def __repr__(self) -> str:
        m, n = self.matrix.shape
        return f"PolyhedronSpec({m} rows, {n} cols)"


@dataclass(frozen=True)
class ModuleInterface:
    """Constant vector d and minimal variable span D of a module A.

    For every feasible x, S_A x_A - d lies in span(D); dim is the number
    of basis columns of D and is minimal, so span(D) is unique.
    """

    module: frozenset
    constant: dict
    variable_basis: RationalMatrix
    dim: int

    def spans(self, delta: Mapping[str, object]) -> bool:
        """Whether the vector (indexed like d) lies in span(D)."""
        col = RationalMatrix(self.variable_basis.row_names, ("delta",),
                             [[delta[r]] for r in self.variable_basis.row_names])
        return ratmat.rank(self.variable_basis.hstack(col)) == self.dim


def _check_subset(poly: PolyhedronSpec, subset: Iterable[str]) -> frozenset:
    names = frozenset(subset)
    extra = names - set(poly.columns)
    if extra:
        raise KeyError(f"not columns of the polyhedron: {sorted(extra)}")
    return names


def variable_set(poly: PolyhedronSpec) -> frozenset:
    """Q = {i : max x_i != min x_i over P}; raises on empty P."""
    return poly.variable_set()


def reduce(poly: PolyhedronSpec) -> tuple[PolyhedronSpec, dict]:
    """Split P into its variable part and the constant coordinates.

    Returns (reduced, fixed): reduced is over the columns Q with right
    hand side b - S_{R minus Q} fixed, and fixed maps each constant
    coordinate to its value. Vertices of P are vertices of the reduced
    polyhedron glued with fixed.
    """
    q = poly.variable_set()
    if q == set(poly.columns):
        return poly, {}
    ranges = poly.ranges()
    fixed = {c: ranges[c][0] for c in poly.columns if c not in q}
    constant_part = poly.matrix.restrict_columns(fixed).matvec(fixed)
    rhs = {r: poly.rhs[r] - constant_part[r] for r in poly.rows}
    return PolyhedronSpec(poly.variable_matrix(), rhs), fixed


def is_k_module(poly: PolyhedronSpec, subset: Iterable[str], k: int) -> bool:
    """Whether A is a k-module of P: its trace on Q is a (k+1)-separator of S_Q."""
    names = _check_subset(poly, subset)
    if k < 0:
        raise ValueError("k must be >= 0")
    return poly.variable_matroid().is_k_separator(names & poly.variable_set(), k + 1)


def _kernel_images(poly: PolyhedronSpec, names: frozenset) -> RationalMatrix:
    """Columns {S_A w_A : w a kernel basis vector of S_Q} (w zero outside Q)."""
    active = tuple(sorted(names & poly.variable_set()))
    kernel = poly.variable_kernel()
    sub = poly.matrix.columns(active)
    cols = []
    for wname in kernel.col_names:
        image = sub.matvec({c: kernel.entry(c, wname) for c in active})
        cols.append([image[r] for r in poly.rows])
    entries = [[col[i] for col in cols] for i in range(len(poly.rows))]
    return RationalMatrix(poly.rows, kernel.col_names, entries)


def interface_dim(poly: PolyhedronSpec, subset: Iterable[str]) -> int:
    """The minimal k for which A is a k-module of P."""
    names = _check_subset(poly, subset)
    return ratmat.rank(_kernel_images(poly, names))


def interface(poly: PolyhedronSpec, subset: Iterable[str]) -> ModuleInterface:
    """Minimal interface (d, D) of a module: d from a feasible point, D canonical.

    d itself is not unique (any feasible point works); only d + span(D)
    is. The basis D is in reduced echelon form, so equal spans compare
    equal.
    """
    names = _check_subset(poly, subset)
    point = poly.feasible_point()
    if point is None:
        raise EmptyPolyhedronError("polyhedron is empty")
    sub = poly.matrix.restrict_columns(names)
    constant = sub.matvec({c: point[c] for c in sub.col_names})
    basis = ratmat.column_space_basis(_kernel_images(poly, names))
    return ModuleInterface(names, constant, basis, len(basis.col_names))


def kernel_image_dim(matrix: RationalMatrix, subset: Iterable[str]) -> int:
    """dim(S_A pr_A ker S) for a bare matrix, straight from the kernel.

    This is the purely linear version of interface_dim: no feasibility,
    no restriction to Q.
    """
    names = frozenset(subset)
    extra = names - set(matrix.col_names)
    if extra:
        raise KeyError(f"not columns: {sorted(extra)}")
    active = tuple(sorted(names))
    kernel = ratmat.kernel_basis(matrix)
    sub = matrix.columns(active)
    cols = []
    for wname in kernel.col_names:
        image = sub.matvec({c: kernel.entry(c, wname) for c in active})
        cols.append([image[r] for r in matrix.row_names])
    entries = [[col[i] for col in cols] for i in range(len(matrix.row_names))]
    return ratmat.rank(RationalMatrix(matrix.row_names, kernel.col_names, entries))
