"""Exact rational scalars and dense matrices with named rows and columns.

Every decision made by this package (feasibility, rank, sign of an LP
optimum) reduces to exact arithmetic done here; nothing ever rounds.
Scalars are gmpy2.mpq when available, fractions.Fraction otherwise.
Both keep p/q in lowest terms with q > 0 and serialize as "p/q", or
just "p" when the denominator is 1.

Matrices are dense and addressed by row/column *names* so that a
submatrix keeps the identity of its columns: selecting columns A from S
yields S_A with (S_A)[m, i] == S[m, i] for every i in A.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Rational

ZERO = Rational(0)
ONE = Rational(1)


def rat(value) -> Rational:
    """Convert an int, "p/q" string, or rational to an exact Rational.

    Floats are rejected: they carry rounding error and must never reach
    a decision path.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing to convert float {value!r}; use an exact rational")
    return Rational(value)


def rat_str(value) -> str:
    """Serialize exactly, base 10, no whitespace: "p/q" or "p"."""
    return str(value)


def _bits(q) -> int:
    # pivot size heuristic: total bit length of numerator and denominator
    return q.numerator.bit_length() + q.denominator.bit_length()


class RationalMatrix:
    """Immutable dense matrix of Rationals with unique row/column names."""

    __slots__ = ("row_names", "col_names", "entries", "_row_index", "_col_index")

    def __init__(self, row_names: Sequence[str], col_names: Sequence[str], entries):
        self.row_names = tuple(row_names)
        self.col_names = tuple(col_names)
        if len(set(self.row_names)) != len(self.row_names):
            raise ValueError("duplicate row names")
        if len(set(self.col_names)) != len(self.col_names):
            raise ValueError("duplicate column names")
        grid = tuple(tuple(rat(v) for v in row) for row in entries)
        if len(grid) != len(self.row_names):
            raise ValueError(f"expected {len(self.row_names)} rows, got {len(grid)}")
        for row in grid:
            if len(row) != len(self.col_names):
                raise ValueError("row length does not match column count")
        self.entries = grid
        self._row_index = {name: i for i, name in enumerate(self.row_names)}
        self._col_index = {name: j for j, name in enumerate(self.col_names)}

    @classmethod
    def identity(cls, names: Sequence[str]) -> "RationalMatrix":
        names = tuple(names)
        n = len(names)
        return cls(names, names, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_names), len(self.col_names)

    def entry(self, row: str, col: str) -> Rational:
        return self.entries[self._row_index[row]][self._col_index[col]]

    def column(self, name: str) -> tuple:
        j = self._col_index[name]
        return tuple(row[j] for row in self.entries)

    def columns(self, names: Iterable[str]) -> "RationalMatrix":
        """Submatrix with the given columns, in the given order."""
        names = tuple(names)
        idx = [self._col_index[n] for n in names]
        return RationalMatrix(self.row_names, names, [[row[j] for j in idx] for row in self.entries])

    def restrict_columns(self, names: Iterable[str]) -> "RationalMatrix":
        """Submatrix S_A: columns in A, kept in this matrix's order."""
        wanted = set(names)
        unknown = wanted - set(self.col_names)
        if unknown:
            raise KeyError(f"unknown columns: {sorted(unknown)}")
        return self.columns(n for n in self.col_names if n in wanted)

    def transpose(self) -> "RationalMatrix":
        m, n = self.shape
        return RationalMatrix(
            self.col_names, self.row_names, [[self.entries[i][j] for i in range(m)] for j in range(n)]
        )

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.row_names != self.row_names:
            raise ValueError("hstack requires identical row names")
        return RationalMatrix(
            self.row_names,
            self.col_names + other.col_names,
            [left + right for left, right in zip(self.entries, other.entries)],
        )

    def with_row(self, name: str, coeffs: Mapping[str, object]) -> "RationalMatrix":
        """Copy with one extra row appended; missing coefficients are 0."""
        row = [rat(coeffs.get(c, 0)) for c in self.col_names]
        return RationalMatrix(self.row_names + (name,), self.col_names, list(self.entries) + [row])

    def matvec(self, vec: Mapping[str, object]) -> dict:
        """Apply to a vector given as {column name: value}; result by row name."""
        vals = [rat(vec[c]) for c in self.col_names]
        out = {}
        for name, row in zip(self.row_names, self.entries):
            acc = ZERO
            for a, x in zip(row, vals):
                if a and x:
                    acc += a * x
            out[name] = acc
        return out

    def scaled(self, factor) -> "RationalMatrix":
        f = rat(factor)
        return RationalMatrix(
            self.row_names, self.col_names, [[f * v for v in row] for row in self.entries]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return (
            self.row_names == other.row_names
            and self.col_names == other.col_names
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.row_names, self.col_names, self.entries))

    def __repr__(self) -> str:
        m, n = self.shape
        return f"RationalMatrix({m}x{n}, rows={list(self.row_names)}, cols={list(self.col_names)})"


def _rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot column indices).

    Pivot choice prefers the smallest-bit-size nonzero entry in the
    current column, which keeps intermediate numerators and denominators
    from ballooning on typical inputs.
    """
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        best = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            if v and (best is None or _bits(v) < best[0]):
                best = (_bits(v), i)
        if best is None:
            continue
        i = best[1]
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        if piv != ONE:
            inv = ONE / piv
            rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(matrix: RationalMatrix) -> int:
    """Exact rank over the rationals."""
    work = [list(row) for row in matrix.entries]
    _, pivots = _rref(work)
    return len(pivots)


def kernel_basis(matrix: RationalMatrix) -> RationalMatrix:
    """Basis of ker(matrix) as columns of a new matrix.

    The result has one *row* per column of the input (so kernel vectors
    are addressable by the original column names) and one column per
    basis vector, named w1, w2, ...; it has zero columns when the map is
    injective.
    """
    m, n = matrix.shape
    work = [list(row) for row in matrix.entries]
    _, pivots = _rref(work)
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    basis_cols = []
    for f in free:
        vec = [ZERO] * n
        vec[f] = ONE
        for r, c in enumerate(pivots):
            vec[c] = -work[r][f]
        basis_cols.append(vec)
    names = tuple(f"w{i + 1}" for i in range(len(basis_cols)))
    entries = [[basis_cols[k][j] for k in range(len(basis_cols))] for j in range(n)]
    return RationalMatrix(matrix.col_names, names, entries)


def column_space_basis(matrix: RationalMatrix) -> RationalMatrix:
    """Canonical basis of the column space, as columns v1, v2, ...

    Canonical means derived from the reduced echelon form of the
    transpose, so two matrices with equal column spans get equal bases.
    """
    work = [list(matrix.column(c)) for c in matrix.col_names]
    _, pivots = _rref(work)
    basis = work[: len(pivots)]
    names = tuple(f"v{i + 1}" for i in range(len(basis)))
    entries = [[basis[k][i] for k in range(len(basis))] for i in range(len(matrix.row_names))]
    return RationalMatrix(matrix.row_names, names, entries)


def solve_exact(matrix: RationalMatrix, rhs: Mapping[str, object]) -> dict | None:
    """One exact solution of matrix * x = rhs, or None if inconsistent.

    When the columns are linearly independent the solution is unique;
    otherwise the free variables are set to zero.
    """
    m, n = matrix.shape
    aug = [list(row) + [rat(rhs[name])] for row, name in zip(matrix.entries, matrix.row_names)]
    if m == 0:
        return {c: ZERO for c in matrix.col_names}
    _, pivots = _rref(aug)
    if n in pivots:  # pivot in the rhs column: inconsistent
        return None
    solution = {c: ZERO for c in matrix.col_names}
    for r, c in enumerate(pivots):
        solution[matrix.col_names[c]] = aug[r][n]
    return solution
