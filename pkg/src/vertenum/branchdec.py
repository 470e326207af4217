"""Branch decompositions of the column matroid and the rooted module family.

A branch decomposition is an unrooted tree whose internal nodes have
degree 3 and whose leaves are labeled bijectively with the matrix
columns; the width of an edge is the connectivity of the leaf partition
it induces, and the width of the decomposition is the worst edge.

Rooting a decomposition of width w at a subdivided edge turns it into a
binary rooted family of column subsets (root = all columns, leaves =
singletons) in which every node is a (w-1)-module; that family, with
per-node interfaces attached, is what the face recursion consumes.

Construction is either exhaustive (all unordered leaf trees, minimum
width guaranteed, only sensible for small column counts) or a greedy
agglomerative heuristic: repeatedly merge the pair of clusters whose
union has the smallest connectivity, ties broken by lexicographically
smallest merged name set. The greedy tree is always valid; its width
is best effort and is reported, never assumed.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from . import kmodule as _kmodule
from .errors import DecompositionError
from .kmodule import ModuleInterface, PolyhedronSpec
from .matroid import LinearMatroid


class BranchDecomposition:
    """Unrooted tree with degree-3 internal nodes and labeled leaves."""

    def __init__(self, edges: Iterable[tuple[int, int]], leaf_labels: Mapping[int, str]):
        self.edges = tuple((u, v) for u, v in edges)
        self.leaf_labels = dict(leaf_labels)
        adj: dict[int, list[int]] = {}
        for u, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        for leaf in self.leaf_labels:
            adj.setdefault(leaf, [])
        self.adjacency = adj
        self._validate()

    def _validate(self) -> None:
        labels = list(self.leaf_labels.values())
        if len(set(labels)) != len(labels):
            raise DecompositionError("duplicate leaf labels")
        nodes = set(self.adjacency)
        if not nodes:
            raise DecompositionError("empty decomposition")
        if len(self.edges) != len(nodes) - 1:
            raise DecompositionError("not a tree: edge count mismatch")
        if len(set(map(frozenset, self.edges))) != len(self.edges):
            raise DecompositionError("duplicate edges")
        seen = set()
        stack = [next(iter(nodes))]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(self.adjacency[u])
        if seen != nodes:
            raise DecompositionError("not a tree: disconnected")
        for node, nbrs in self.adjacency.items():
            degree = len(nbrs)
            if node in self.leaf_labels:
                if degree > 1:
                    raise DecompositionError(f"labeled leaf {node} has degree {degree}")
            elif degree != 3:
                raise DecompositionError(f"internal node {node} has degree {degree}, want 3")

    @property
    def ground_set(self) -> frozenset:
        return frozenset(self.leaf_labels.values())

    def leaf_partition(self, u: int, v: int) -> tuple[frozenset, frozenset]:
        """Leaf label sets on the two sides of the edge (u, v)."""
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in self.adjacency[x]:
                if (x, y) == (u, v) or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        side = frozenset(self.leaf_labels[x] for x in seen if x in self.leaf_labels)
        return side, self.ground_set - side


def width_of(matroid: LinearMatroid, decomp: BranchDecomposition) -> int:
    """Exact width: the maximum edge connectivity; 1 for a single-leaf tree."""
    if decomp.ground_set != matroid.ground_set:
        raise DecompositionError(
            f"decomposition labels {sorted(decomp.ground_set)} do not match "
            f"matroid elements {sorted(matroid.ground_set)}"
        )
    if not decomp.edges:
        return 1
    return max(matroid.connectivity(decomp.leaf_partition(u, v)[0]) for u, v in decomp.edges)


def _all_leaf_trees(n: int):
    """All unrooted binary trees on leaves 0..n-1 (internal ids from n up)."""
    trees = [[(0, 1)]]
    for leaf in range(2, n):
        grown = []
        for edges in trees:
            w = n + leaf - 2  # one fresh internal node per added leaf
            for i, (u, v) in enumerate(edges):
                grown.append(edges[:i] + edges[i + 1:] + [(u, w), (w, v), (leaf, w)])
        trees = grown
    return trees


def _tree_splits(edges: list[tuple[int, int]], n: int) -> list[int]:
    """Leaf bitmask under the child side of every edge (rooted at leaf 0)."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent = {0: None}
    order = [0]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    mask = {}
    for x in reversed(order):
        m = 1 << x if x < n else 0
        for y in adj[x]:
            if y != parent[x]:
                m |= mask[y]
        mask[x] = m
    return [mask[x] for x in order if parent[x] is not None]


def decompose(matroid: LinearMatroid, strategy: str = "greedy", limit: int = 8) -> BranchDecomposition:
    """Build a branch decomposition of the matroid.

    strategy "exhaustive" enumerates every unordered leaf tree and
    returns one of minimum width; it refuses more than `limit` elements.
    strategy "greedy" runs the agglomerative heuristic and is valid for
    any size, with no width guarantee.
    """
    names = sorted(matroid.ground_set)
    n = len(names)
    if n < 2:
        raise ValueError("decomposition needs at least 2 columns")
    labels = dict(enumerate(names))
    if strategy == "exhaustive":
        if n > limit:
            raise ValueError(f"exhaustive decomposition limited to {limit} columns, got {n}")
        rho_by_mask: dict[int, int] = {}

        def rho(mask: int) -> int:
            value = rho_by_mask.get(mask)
            if value is None:
                value = matroid.connectivity(names[i] for i in range(n) if mask >> i & 1)
                rho_by_mask[mask] = value
            return value

        best_edges = None
        best_width = None
        for edges in _all_leaf_trees(n):
            w = max(rho(m) for m in _tree_splits(edges, n))
            if best_width is None or w < best_width:
                best_width, best_edges = w, edges
        return BranchDecomposition(best_edges, labels)
    if strategy == "greedy":
        return _greedy_decomposition(matroid, names, labels)
    raise ValueError(f"unknown strategy {strategy!r}")


def _greedy_decomposition(matroid: LinearMatroid, names: list[str], labels: dict[int, str]) -> BranchDecomposition:
    clusters: dict[int, frozenset] = {i: frozenset((name,)) for i, name in enumerate(names)}
    next_id = len(names)
    edges: list[tuple[int, int]] = []
    pair_rho: dict[tuple[int, int], int] = {}

    def score(a: int, b: int):
        union = clusters[a] | clusters[b]
        key = (a, b) if a < b else (b, a)
        r = pair_rho.get(key)
        if r is None:
            r = matroid.connectivity(union)
            pair_rho[key] = r
        return r, tuple(sorted(union))

    while len(clusters) > 2:
        ids = sorted(clusters)
        best = None
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                s = score(a, b)
                if best is None or s < best[0]:
                    best = (s, a, b)
        _, a, b = best
        merged = clusters.pop(a) | clusters.pop(b)
        for key in [k for k in pair_rho if a in k or b in k]:
            del pair_rho[key]
        edges.append((a, next_id))
        edges.append((b, next_id))
        clusters[next_id] = merged
        next_id += 1
    remaining = sorted(clusters)
    if len(remaining) == 2:
        edges.append((remaining[0], remaining[1]))
    return BranchDecomposition(edges, labels)


@dataclass
class ModTree:
    """Binary rooted family of modules with per-node interfaces.

    children maps each non-singleton node set C to its two parts (A, B)
    with C = A disjoint-union B; every node set is a k-module of the
    polyhedron, k = width - 1.
    """

    root: frozenset
    children: dict[frozenset, tuple[frozenset, frozenset]]
    interfaces: dict[frozenset, ModuleInterface]
    width: int
    k: int

    @property
    def nodes(self) -> set[frozenset]:
        return set(self.interfaces)

    def bottom_up(self) -> list[frozenset]:
        """Nodes ordered children before parents (by size, then name)."""
        return sorted(self.nodes, key=lambda a: (len(a), tuple(sorted(a))))

    def is_binary_rooted(self) -> bool:
        """Literal check of the two defining properties of the family."""
        family = self.nodes
        for a in family:
            if a == self.root:
                continue
            partners = [b for b in family if not (a & b) and (a | b) in family]
            if len(partners) != 1:
                return False
        for c in family:
            if len(c) < 2:
                continue
            if not any(
                not (a & b) and (a | b) == c for a in family for b in family if a is not b
            ):
                return False
        return True


def to_mod_family(poly: PolyhedronSpec, decomp: BranchDecomposition) -> ModTree:
    """Root a decomposition into the module family driving the recursion.

    Requires every coordinate of the polyhedron to be non-constant
    (reduce first). The root edge is the one whose partition has the
    smallest connectivity, ties broken lexicographically.
    """
    columns = frozenset(poly.columns)
    if poly.variable_set() != columns:
        raise ValueError("polyhedron has constant coordinates; reduce it first")
    if decomp.ground_set != columns:
        raise DecompositionError("decomposition labels do not match polyhedron columns")
    matroid = poly.variable_matroid()
    width = width_of(matroid, decomp)
    interfaces = {}
    children: dict[frozenset, tuple[frozenset, frozenset]] = {}
    if not decomp.edges:  # single column
        interfaces[columns] = _kmodule.interface(poly, columns)
        return ModTree(columns, children, interfaces, width, width - 1)

    def edge_key(edge):
        u, v = edge
        side_a, side_b = decomp.leaf_partition(u, v)
        keys = sorted((tuple(sorted(side_a)), tuple(sorted(side_b))))
        return (matroid.connectivity(side_a), keys[0], keys[1])

    root_edge = min(decomp.edges, key=edge_key)

    def subset_below(node: int, parent: int) -> frozenset:
        if node in decomp.leaf_labels:
            grown = frozenset((decomp.leaf_labels[node],))
        else:
            parts = [subset_below(nbr, node) for nbr in decomp.adjacency[node] if nbr != parent]
            children[frozenset().union(*parts)] = _ordered_pair(parts)
            grown = frozenset().union(*parts)
        return grown

    u, v = root_edge
    side_u = subset_below(u, v)
    side_v = subset_below(v, u)
    children[columns] = _ordered_pair([side_u, side_v])
    for node_set in set().union(children, *(children.values())) | {columns}:
        if node_set not in interfaces:
            interfaces[node_set] = _kmodule.interface(poly, node_set)
    for singleton in ({c} for c in columns):
        fs = frozenset(singleton)
        if fs not in interfaces:
            interfaces[fs] = _kmodule.interface(poly, fs)
    return ModTree(columns, children, interfaces, width, width - 1)


def _ordered_pair(parts: list[frozenset]) -> tuple[frozenset, frozenset]:
    a, b = sorted(parts, key=lambda s: tuple(sorted(s)))
    return a, b


def format_decomposition(decomp: BranchDecomposition) -> str:
    """Serialize as merge lines ending with a root line.

    One line per internal merge, "merge <id> = <child> <child>" with
    children being column names or earlier merge ids, then "root = <id>".
    """
    labels = decomp.leaf_labels
    if not decomp.edges:
        (leaf,) = labels.values()
        return f"root = {leaf}\n"
    anchor_name = min(labels.values())
    anchor = next(node for node, name in labels.items() if name == anchor_name)
    lines = []
    counter = 0

    def emit(node: int, parent: int | None) -> str:
        nonlocal counter
        if node in labels:
            return labels[node]
        parts = [emit(nbr, node) for nbr in decomp.adjacency[node] if nbr != parent]
        counter += 1
        name = f"m{counter}"
        lines.append(f"merge {name} = {parts[0]} {parts[1]}")
        return name

    # virtual root on the edge at the lexicographically smallest leaf
    other = decomp.adjacency[anchor][0]
    left = emit(anchor, other)
    right = emit(other, anchor)
    counter += 1
    lines.append(f"merge m{counter} = {left} {right}")
    lines.append(f"root = m{counter}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str, columns: Iterable[str]) -> BranchDecomposition:
    """Parse the merge-line format; strict about names and coverage."""
    columns = list(columns)
    column_set = set(columns)
    node_of = {name: i for i, name in enumerate(columns)}
    labels = dict(enumerate(columns))
    next_id = len(columns)
    consumed: set[str] = set()
    defined: set[str] = set()
    edges: list[tuple[int, int]] = []
    root_name = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if root_name is not None:
            raise DecompositionError(f"line {lineno}: content after root line")
        parts = line.split()
        if parts[0] == "merge":
            if len(parts) != 5 or parts[2] != "=":
                raise DecompositionError(f"line {lineno}: expected 'merge <id> = <a> <b>'")
            mid, a, b = parts[1], parts[3], parts[4]
            if mid in column_set or mid in defined:
                raise DecompositionError(f"line {lineno}: id {mid!r} already in use")
            for child in (a, b):
                if child not in column_set and child not in defined:
                    raise DecompositionError(f"line {lineno}: unknown name {child!r}")
                if child in consumed:
                    raise DecompositionError(f"line {lineno}: {child!r} used twice")
            if a == b:
                raise DecompositionError(f"line {lineno}: children must differ")
            node_of[mid] = next_id
            edges.append((node_of[a], next_id))
            edges.append((node_of[b], next_id))
            consumed.update((a, b))
            defined.add(mid)
            next_id += 1
        elif parts[0] == "root":
            if len(parts) != 3 or parts[1] != "=":
                raise DecompositionError(f"line {lineno}: expected 'root = <id>'")
            root_name = parts[2]
            if root_name not in column_set and root_name not in defined:
                raise DecompositionError(f"line {lineno}: unknown root {root_name!r}")
            if root_name in consumed:
                raise DecompositionError(f"line {lineno}: root {root_name!r} already consumed")
        else:
            raise DecompositionError(f"line {lineno}: unrecognized directive {parts[0]!r}")
    if root_name is None:
        raise DecompositionError("missing root line")
    leftovers = (column_set | defined) - consumed - {root_name}
    if leftovers:
        raise DecompositionError(f"names never merged into the root: {sorted(leftovers)}")
    root_id = node_of[root_name]
    if root_name in defined:
        # undo the subdivision: join the root's two children directly
        child_edges = [e for e in edges if root_id in e]
        endpoints = [u if v == root_id else v for u, v in child_edges]
        edges = [e for e in edges if root_id not in e]
        if len(endpoints) == 2:
            edges.append((endpoints[0], endpoints[1]))
    elif column_set != {root_name}:
        raise DecompositionError("root is a single column but other columns exist")
    return BranchDecomposition(edges, labels)
