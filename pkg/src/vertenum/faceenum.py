"""The face recursion: minimal feasible faces per module, merged bottom-up.

A face of a module A is identified with its zero set F, a subset of A.
F is feasible when some feasible x has x_F = 0 and x strictly positive
on the rest of A, and minimal when the aggregate map S_A is injective
on the local polyhedron P^A cut down to x_F = 0. At singleton modules
only the empty face and the full face can occur; at an internal node
every union of a face from each child is tried and kept iff it is
feasible and minimal for the parent. At the root (a 0-module) the
surviving faces are exactly the zero sets of the vertices, and each
determines its vertex by one exact linear solve.

Minimality is certified per the LP recipe: compute the coordinates G
that are non-constant on {x in P^A : x_F = 0} (with the interface
degrees of freedom alpha left free) and test S_G for full column rank.
"""

from __future__ import annotations

import warnings
from collections.abc import Iterable
from dataclasses import dataclass

from . import lp, ratmat
from .errors import EmptyPolyhedronError, UnboundedPolyhedronError
from .kmodule import ModuleInterface, PolyhedronSpec
from .branchdec import ModTree
from .ratmat import RationalMatrix, ZERO


@dataclass(frozen=True)
class Face:
    """Zero set of a candidate face, tagged with the module it lives in."""

    module: frozenset
    zeros: frozenset

    def __post_init__(self):
        if not self.zeros <= self.module:
            raise ValueError("face zeros must lie inside the module")


@dataclass(frozen=True)
class VertexSet:
    """Deduplicated exact points, as coordinate tuples in column order."""

    columns: tuple
    points: frozenset

    @classmethod
    def from_dicts(cls, columns: Iterable[str], points: Iterable[dict]) -> "VertexSet":
        cols = tuple(columns)
        return cls(cols, frozenset(tuple(p[c] for c in cols) for p in points))

    def sorted_points(self) -> list[tuple]:
        return sorted(self.points)

    def as_dicts(self) -> list[dict]:
        return [dict(zip(self.columns, p)) for p in self.sorted_points()]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point) -> bool:
        return tuple(point) in self.points


def lifted_face_region(poly: PolyhedronSpec, iface: ModuleInterface, zeros: Iterable[str]) -> lp.FeasibleRegion:
    """The local set {x in P^A : x_F = 0} as an LP region.

    Variables are the module coordinates outside F (nonnegative) plus
    one free coefficient per interface basis vector; the constraints are
    S_{A minus F} x - D alpha = d over all matrix rows.
    """
    module = iface.module
    F = frozenset(zeros)
    if not F <= module:
        raise ValueError("zeros must lie inside the module")
    keep = [c for c in poly.columns if c in module - F]
    sub = poly.matrix.columns(keep)
    taken = set(poly.columns) | set(poly.rows)
    alpha = [lp.fresh_name(f"alpha{j + 1}", taken) for j in range(iface.dim)]
    basis = iface.variable_basis
    lifted = RationalMatrix(
        sub.row_names,
        tuple(keep) + tuple(alpha),
        [
            list(row) + [-basis.entries[i][j] for j in range(iface.dim)]
            for i, row in enumerate(sub.entries)
        ],
    )
    return lp.FeasibleRegion(lifted, iface.constant, free=alpha)


def _varying_coordinates(poly: PolyhedronSpec, iface: ModuleInterface, zeros: Iterable[str]) -> list[str]:
    """G: module coordinates with non-degenerate range on the lifted region."""
    F = frozenset(zeros)
    region = lifted_face_region(poly, iface, F)
    if region.is_empty:
        raise EmptyPolyhedronError("face region is empty; check feasibility first")
    keep = [c for c in poly.columns if c in iface.module - F]
    ranges = lp.coordinate_ranges(region, keep)
    return [c for c in keep if ranges[c][0] != ranges[c][1]]


def is_minimal(poly: PolyhedronSpec, iface: ModuleInterface, zeros: Iterable[str]) -> bool:
    """Whether the face is minimal: S_G injective for G the varying coordinates."""
    g = _varying_coordinates(poly, iface, zeros)
    return ratmat.rank(poly.matrix.columns(g)) == len(g)


def face_dimension(poly: PolyhedronSpec, iface: ModuleInterface, zeros: Iterable[str]) -> int:
    """Dimension of {x in P^A : x_F = 0}, via the kernel of the lifted system."""
    g = _varying_coordinates(poly, iface, zeros)
    sub = poly.matrix.columns(g)
    taken = set(poly.columns)
    basis = iface.variable_basis
    renamed = RationalMatrix(
        basis.row_names,
        tuple(lp.fresh_name(c, taken) for c in basis.col_names),
        basis.entries,
    )
    stacked = sub.hstack(renamed.scaled(-1))
    return len(g) + iface.dim - ratmat.rank(stacked)


def leaf_faces(poly: PolyhedronSpec, iface: ModuleInterface) -> set[Face]:
    """Faces of a singleton module: the empty face if feasible, the full
    face if feasible and minimal."""
    module = iface.module
    if len(module) != 1:
        raise ValueError("leaf_faces expects a singleton module")
    out = set()
    if lp.face_feasible(poly, module, frozenset()):
        out.add(Face(module, frozenset()))
    if lp.face_feasible(poly, module, module) and is_minimal(poly, iface, module):
        out.add(Face(module, module))
    return out


def merge(poly: PolyhedronSpec, iface: ModuleInterface, faces_a: Iterable[Face], faces_b: Iterable[Face]) -> set[Face]:
    """Minimal feasible faces of C = A + B from complete child face sets.

    Every union of a child face pair is a candidate; candidates are
    deduplicated, then filtered by feasibility and minimality for C.
    Completeness relies on the child sets being complete.
    """
    module = iface.module
    candidates = {fa.zeros | fb.zeros for fa in faces_a for fb in faces_b}
    out = set()
    for zeros in sorted(candidates, key=lambda z: tuple(sorted(z))):
        if lp.face_feasible(poly, module, zeros) and is_minimal(poly, iface, zeros):
            out.add(Face(module, zeros))
    return out


@dataclass
class EnumerationRun:
    """Vertices plus the per-node face sets the recursion produced."""

    vertices: VertexSet
    node_faces: dict


def run_enumeration(poly: PolyhedronSpec, tree: ModTree, *, allow_unbounded: bool = False) -> EnumerationRun:
    """Execute the face recursion over the whole module tree.

    Requires a nonempty polyhedron whose coordinates are all
    non-constant (reduce first). Unbounded polyhedra are refused unless
    allow_unbounded is set; with it, enumeration still returns exactly
    the vertices but the bounded-case size guarantees do not apply.
    """
    if poly.is_empty():
        raise EmptyPolyhedronError("polyhedron is empty")
    if frozenset(poly.columns) != tree.root:
        raise ValueError("module tree does not match the polyhedron columns")
    if not poly.is_bounded():
        if not allow_unbounded:
            raise UnboundedPolyhedronError(
                "polyhedron is unbounded; pass allow_unbounded to enumerate anyway"
            )
        warnings.warn("enumerating vertices of an unbounded polyhedron; "
                      "output-size bounds do not apply", stacklevel=2)
    faces: dict[frozenset, frozenset] = {}
    for node in tree.bottom_up():
        iface = tree.interfaces[node]
        if len(node) == 1:
            faces[node] = frozenset(leaf_faces(poly, iface))
        else:
            child_a, child_b = tree.children[node]
            faces[node] = frozenset(merge(poly, iface, faces[child_a], faces[child_b]))
    points = []
    for face in faces[tree.root]:
        support = [c for c in poly.columns if c not in face.zeros]
        sub = poly.matrix.columns(support)
        solution = ratmat.solve_exact(sub, poly.rhs)
        assert solution is not None, "root face lost feasibility"
        assert ratmat.rank(sub) == len(support), "root face support is dependent"
        assert all(solution[c] > 0 for c in support), "root face support not strict"
        full = {c: ZERO for c in poly.columns}
        full.update(solution)
        points.append(full)
    vertices = VertexSet.from_dicts(poly.columns, points)
    assert len(vertices) == len(faces[tree.root])
    return EnumerationRun(vertices=vertices, node_faces=faces)


def enumerate_vertices(poly: PolyhedronSpec, tree: ModTree, *, allow_unbounded: bool = False) -> VertexSet:
    """All vertices of the polyhedron, per the module-tree recursion."""
    return run_enumeration(poly, tree, allow_unbounded=allow_unbounded).vertices
