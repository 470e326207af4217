"""Exact rational linear programming.

A two-phase primal simplex on a dense tableau of Rationals, with
Bland's rule in both phases so termination is guaranteed without any
tolerance. Free variables are split into differences of two
nonnegative ones. A FeasibleRegion keeps its phase-1 factorization
alive so that many objectives over the same constraints (coordinate
ranges, in particular) cost one phase each instead of two.

Unboundedness and infeasibility are reported as statuses, never as
errors: callers decide what they mean.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import EmptyPolyhedronError
from .ratmat import ONE, ZERO, Rational, RationalMatrix, rat

POS_INF = float("inf")
NEG_INF = float("-inf")


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpProblem:
    """max objective . x  subject to  matrix x = rhs, x >= 0 except free vars.

    rhs is keyed by row name, objective by column name (missing entries
    are zero), and free lists columns allowed to take any sign.
    """

    matrix: RationalMatrix
    rhs: Mapping[str, object]
    objective: Mapping[str, object] = field(default_factory=dict)
    free: frozenset = frozenset()


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    point: dict | None = None
    value: Rational | None = None


class _Simplex:
    """Dense tableau over nonnegative variables; phase 1 runs at construction."""

    def __init__(self, rows: list[list], rhs: list):
        self.n = len(rows[0]) if rows else 0
        m = len(rows)
        tab = []
        for row, b in zip(rows, rhs):
            if b < 0:
                tab.append([-v for v in row] + [-b])
            else:
                tab.append(list(row) + [b])
        # artificial basis: columns n .. n+m-1
        for i, row in enumerate(tab):
            art = [ZERO] * m
            art[i] = ONE
            row[-1:-1] = art
        self.tab = tab
        self.basis = list(range(self.n, self.n + m))
        self.width = self.n + m
        z = [ZERO] * (self.width + 1)
        for j in range(self.width + 1):
            z[j] = sum((row[j] for row in tab), ZERO)
        for i in range(m):
            z[self.n + i] -= ONE  # cost -1 on each artificial
        self.z = z
        self._run(eligible=self.width)
        self.feasible = -self.z[-1] == 0
        if self.feasible:
            self._drop_artificials()

    def _pivot(self, r: int, j: int) -> None:
        tab = self.tab
        row = tab[r]
        piv = row[j]
        if piv != ONE:
            inv = ONE / piv
            row = [v * inv for v in row]
            tab[r] = row
        for i in range(len(tab)):
            if i != r and tab[i][j]:
                f = tab[i][j]
                tab[i] = [a - f * b for a, b in zip(tab[i], row)]
        if self.z[j]:
            f = self.z[j]
            self.z = [a - f * b for a, b in zip(self.z, row)]
        self.basis[r] = j

    def _run(self, eligible: int) -> str:
        """Pivot to optimality over columns [0, eligible). Bland's rule throughout."""
        tab, z = self.tab, self.z
        while True:
            enter = -1
            for j in range(eligible):
                if self.z[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best = None
            for i, row in enumerate(tab):
                coef = row[enter]
                if coef > 0:
                    ratio = row[-1] / coef
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            self._pivot(leave, enter)

    def _drop_artificials(self) -> None:
        n = self.n
        dead = []
        for i, b in enumerate(self.basis):
            if b >= n:
                for j in range(n):
                    if self.tab[i][j]:
                        self._pivot(i, j)
                        break
                else:
                    dead.append(i)  # redundant constraint row
        for i in reversed(dead):
            del self.tab[i]
            del self.basis[i]
        self.tab = [row[:n] + row[-1:] for row in self.tab]
        self.width = n
        self.z = None

    def maximize(self, obj: list) -> tuple[str, object, list | None]:
        """Re-optimize from the current feasible basis for a new objective.

        Returns (status, value, point) with point listing all n variable
        values; status is "optimal" or "unbounded".
        """
        if not self.feasible:
            raise EmptyPolyhedronError("maximize over an empty region")
        z = list(obj) + [ZERO] * (self.width - self.n) + [ZERO]
        for i, b in enumerate(self.basis):
            c = z[b]
            if c:
                z = [a - c * t for a, t in zip(z, self.tab[i])]
        self.z = z
        status = self._run(eligible=self.n)
        if status != "optimal":
            return status, None, None
        point = [ZERO] * self.n
        for i, b in enumerate(self.basis):
            point[b] = self.tab[i][-1]
        return status, -self.z[-1], point

    def current_point(self) -> list:
        if not self.feasible:
            raise EmptyPolyhedronError("no feasible point")
        point = [ZERO] * self.n
        for i, b in enumerate(self.basis):
            point[b] = self.tab[i][-1]
        return point


class FeasibleRegion:
    """The set {x : matrix x = rhs, x_i >= 0 for i not in free}.

    Phase 1 happens once at construction; any number of exact
    maximize/minimize calls can follow. All returned points satisfy the
    constraints exactly.
    """

    def __init__(self, matrix: RationalMatrix, rhs: Mapping[str, object], free: Iterable[str] = ()):
        self.matrix = matrix
        self.rhs = {r: rat(rhs[r]) for r in matrix.row_names}
        self.free = frozenset(free)
        unknown = self.free - set(matrix.col_names)
        if unknown:
            raise KeyError(f"free variables not in matrix: {sorted(unknown)}")
        cols: list[tuple[str, int]] = []
        for name in matrix.col_names:
            cols.append((name, 1))
            if name in self.free:
                cols.append((name, -1))
        self._cols = cols
        rows = []
        for row in matrix.entries:
            by_name = dict(zip(matrix.col_names, row))
            rows.append([by_name[name] if sign > 0 else -by_name[name] for name, sign in cols])
        self._simplex = _Simplex(rows, [self.rhs[r] for r in matrix.row_names])

    @property
    def is_empty(self) -> bool:
        return not self._simplex.feasible

    def _assemble(self, raw: list) -> dict:
        point = {name: ZERO for name in self.matrix.col_names}
        for (name, sign), v in zip(self._cols, raw):
            point[name] += v if sign > 0 else -v
        if __debug__:
            image = self.matrix.matvec(point)
            assert all(image[r] == self.rhs[r] for r in self.matrix.row_names)
            assert all(point[c] >= 0 for c in self.matrix.col_names if c not in self.free)
        return point

    def some_point(self) -> dict:
        """Any point of the region (from the phase-1 basis)."""
        if self.is_empty:
            raise EmptyPolyhedronError("region is empty")
        return self._assemble(self._simplex.current_point())

    def maximize(self, objective: Mapping[str, object]) -> LpOutcome:
        if self.is_empty:
            raise EmptyPolyhedronError("region is empty")
        obj = {name: rat(v) for name, v in objective.items()}
        raw_obj = [obj.get(name, ZERO) * sign for name, sign in self._cols]
        status, value, raw = self._simplex.maximize(raw_obj)
        if status == "unbounded":
            return LpOutcome(LpStatus.UNBOUNDED)
        point = self._assemble(raw)
        assert value == sum((obj.get(c, ZERO) * point[c] for c in self.matrix.col_names), ZERO)
        return LpOutcome(LpStatus.OPTIMAL, point, value)

    def minimize(self, objective: Mapping[str, object]) -> LpOutcome:
        out = self.maximize({n: -rat(v) for n, v in objective.items()})
        if out.status is LpStatus.OPTIMAL:
            return LpOutcome(LpStatus.OPTIMAL, out.point, -out.value)
        return out


def solve(problem: LpProblem) -> LpOutcome:
    """Exact optimum of an LpProblem, or an Infeasible/Unbounded verdict."""
    region = FeasibleRegion(problem.matrix, problem.rhs, problem.free)
    if region.is_empty:
        return LpOutcome(LpStatus.INFEASIBLE)
    return region.maximize(problem.objective)


def _as_region(constraints: LpProblem | FeasibleRegion) -> FeasibleRegion:
    if isinstance(constraints, FeasibleRegion):
        return constraints
    return FeasibleRegion(constraints.matrix, constraints.rhs, constraints.free)


def coordinate_range(constraints: LpProblem | FeasibleRegion, name: str):
    """Exact (inf, sup) of one coordinate over a nonempty region.

    Unbounded directions come back as the float infinities, used purely
    as markers; every finite bound is an exact Rational.
    """
    lo, hi = coordinate_ranges(constraints, [name])[name]
    return lo, hi


def coordinate_ranges(constraints: LpProblem | FeasibleRegion, names: Iterable[str]) -> dict:
    """Ranges of several coordinates, sharing one phase-1 solve."""
    region = _as_region(constraints)
    if region.is_empty:
        raise EmptyPolyhedronError("region is empty")
    out = {}
    for name in names:
        high = region.maximize({name: ONE})
        hi = POS_INF if high.status is LpStatus.UNBOUNDED else high.value
        low = region.minimize({name: ONE})
        lo = NEG_INF if low.status is LpStatus.UNBOUNDED else low.value
        assert (lo is NEG_INF) or (hi is POS_INF) or lo <= hi
        out[name] = (lo, hi)
    return out


def fresh_name(base: str, taken) -> str:
    """base, prefixed with underscores until it avoids every taken name."""
    name = base
    while name in taken:
        name = "_" + name
    return name


def face_feasible(poly, module: Iterable[str], zeros: Iterable[str]) -> bool:
    """Whether some x in P has x_F = 0 and x_i > 0 for every i in A minus F.

    Decided by maximizing an auxiliary variable bounded above by each
    x_i, i in A minus F, over P intersected with {x_F = 0}: the face is
    feasible exactly when that LP is unbounded or has positive optimum.
    An empty P yields False.
    """
    matrix = poly.matrix
    A = frozenset(module)
    F = frozenset(zeros)
    if not F <= A <= set(matrix.col_names):
        raise ValueError("need zeros <= module <= columns")
    keep = [c for c in matrix.col_names if c not in F]
    strict = [c for c in keep if c in A]
    taken = set(matrix.col_names) | set(matrix.row_names)
    zname = fresh_name("z", taken)
    snames = {c: fresh_name(f"s_{c}", taken) for c in strict}
    col_names = keep + [zname] + [snames[c] for c in strict]
    rows = []
    row_names = []
    sub = matrix.columns(keep)
    pad = [ZERO] * (1 + len(strict))
    for rname, row in zip(sub.row_names, sub.entries):
        rows.append(list(row) + pad)
        row_names.append(rname)
    for k, c in enumerate(strict):
        row = [ZERO] * len(col_names)
        row[keep.index(c)] = ONE
        row[len(keep)] = -ONE
        row[len(keep) + 1 + k] = -ONE
        rows.append(row)
        row_names.append(fresh_name(f"pos_{c}", taken | set(row_names)))
    lp_matrix = RationalMatrix(row_names, col_names, rows)
    rhs = {r: poly.rhs[r] for r in matrix.row_names}
    rhs.update({r: ZERO for r in row_names[len(matrix.row_names):]})
    region = FeasibleRegion(lp_matrix, rhs, free={zname})
    if region.is_empty:
        return False
    out = region.maximize({zname: ONE})
    return out.status is LpStatus.UNBOUNDED or out.value > 0
