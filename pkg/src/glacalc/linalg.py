"""Linear algebra over the field of rational functions.

Elimination is fraction-free (Bareiss): rows are first scaled to polynomial
entries, and each update divides by the previous pivot, which is exact.
Pivots are the first nonzero entry in column order, so results are
deterministic.  Rank is generic rank over the function field.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from . import _poly as P
from .errors import DimensionError, SingularMatrixError
from .expr import CoordinateSystem, Expr, as_expr

Column = List[Expr]


class _NoSolution:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_SOLUTION"

    def __bool__(self):
        return False


NO_SOLUTION = _NoSolution()


class ExprMatrix:
    """Dense immutable matrix of :class:`Expr` over one coordinate system."""

    __slots__ = ("coords", "rows", "cols", "_data")

    def __init__(self, coords: CoordinateSystem, data: Sequence[Sequence], cols: Optional[int] = None):
        self.coords = coords
        rows = tuple(tuple(as_expr(v, coords) for v in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise DimensionError(f"ragged matrix: expected {cols} columns, got {len(row)}")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def from_columns(cls, coords: CoordinateSystem, columns: Sequence[Sequence], nrows: int) -> "ExprMatrix":
        for col in columns:
            if len(col) != nrows:
                raise DimensionError(f"column of length {len(col)}, expected {nrows}")
        data = [[columns[j][i] for j in range(len(columns))] for i in range(nrows)]
        return cls(coords, data, cols=len(columns))

    @classmethod
    def identity(cls, coords: CoordinateSystem, n: int) -> "ExprMatrix":
        return cls(coords, [[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, coords: CoordinateSystem, rows: int, cols: int) -> "ExprMatrix":
        return cls(coords, [[0] * cols for _ in range(rows)], cols=cols)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> Expr:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> List[Expr]:
        return list(self._data[i])

    def column(self, j: int) -> List[Expr]:
        return [r[j] for r in self._data]

    def tolist(self) -> List[List[Expr]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "ExprMatrix":
        return ExprMatrix.from_columns(self.coords, self._data, self.cols) if self.rows else \
            ExprMatrix(self.coords, [[] for _ in range(self.cols)], cols=0)

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, ExprMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            for i in range(self.rows):
                out.append([_dot(self._data[i], other.column(j), self.coords) for j in range(other.cols)])
            return ExprMatrix(self.coords, out, cols=other.cols)
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionError(f"cannot apply {self.shape} matrix to vector of length {len(vec)}")
        return [_dot(r, vec, self.coords) for r in self._data]

    def map(self, fn, coords: Optional[CoordinateSystem] = None) -> "ExprMatrix":
        """Entrywise ``fn``; pass ``coords`` when ``fn`` changes coordinate system."""
        return ExprMatrix(coords or self.coords, [[fn(v) for v in r] for r in self._data], cols=self.cols)

    def is_zero(self) -> bool:
        return all(v.is_zero() for r in self._data for v in r)

    def __eq__(self, other):
        if not isinstance(other, ExprMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self._data, other._data) for a, b in zip(ra, rb))

    __hash__ = None

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in r) for r in self._data)
        return f"ExprMatrix({self.rows}x{self.cols}: [{body}])"


def _dot(a: Sequence[Expr], b: Sequence[Expr], coords: CoordinateSystem) -> Expr:
    total = coords.zero()
    for x, y in zip(a, b):
        if x.num and y.num:
            total = total + x * y
    return total


def _clear_row(row: List[Expr]) -> List[Expr]:
    """Scale a row by the product of its distinct denominators."""
    if not row:
        return row
    dens = []
    for v in row:
        if not v.is_polynomial() and not any(v.den == d for d in dens):
            dens.append(v.den)
    if not dens:
        return row
    coords = row[0].coords
    scale = Expr(coords, P.one(coords.dimension), _canonical=True)
    for d in dens:
        scale = scale * Expr(coords, d, _canonical=True)
    return [v * scale for v in row]


def echelon(rows: Sequence[Sequence[Expr]], ncols: int) -> Tuple[List[List[Expr]], List[int]]:
    """Fraction-free row echelon form; returns (rows, pivot columns)."""
    a = [_clear_row(list(r)) for r in rows]
    m = len(a)
    if m == 0:
        return a, []
    coords = a[0][0].coords if ncols else None
    prev: Optional[Expr] = None
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if not a[i][c].is_zero()), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, m):
            f = a[i][c]
            row_i = a[i]
            for j in range(c + 1, ncols):
                v = p * row_i[j]
                if f.num and a[r][j].num:
                    v = v - f * a[r][j]
                if prev is not None:
                    v = v / prev
                row_i[j] = v
            row_i[c] = coords.zero()
        prev = p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(M: ExprMatrix) -> int:
    """Generic rank over the rational-function field."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(echelon(M.tolist(), M.cols)[1])


def _back_substitute(ech: List[List[Expr]], pivots: List[int], ncols: int,
                     rhs: List[Expr], fixed: dict, coords: CoordinateSystem) -> List[Expr]:
    x: List[Optional[Expr]] = [None] * ncols
    for j, v in fixed.items():
        x[j] = v
    for j in range(ncols):
        if x[j] is None and j not in pivots:
            x[j] = coords.zero()
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        s = rhs[k]
        row = ech[k]
        for j in range(c + 1, ncols):
            if row[j].num and x[j].num:
                s = s - row[j] * x[j]
        x[c] = s / row[c]
    return x


def nullspace(M: ExprMatrix) -> List[Column]:
    """Basis of the right kernel; entries are polynomials."""
    coords = M.coords
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [[coords.one() if i == j else coords.zero() for i in range(M.cols)] for j in range(M.cols)]
    ech, pivots = echelon(M.tolist(), M.cols)
    rhs = [coords.zero()] * len(pivots)
    basis = []
    for f in range(M.cols):
        if f in pivots:
            continue
        fixed = {j: (coords.one() if j == f else coords.zero()) for j in range(M.cols) if j not in pivots}
        v = _back_substitute(ech, pivots, M.cols, rhs, fixed, coords)
        basis.append(_clear_row(v))
    return basis


def solve(M: ExprMatrix, b: Sequence) -> "Column | _NoSolution":
    """A solution of ``M x = b`` over the function field, or ``NO_SOLUTION``."""
    coords = M.coords
    b = [as_expr(v, coords) for v in b]
    if len(b) != M.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {M.rows} rows")
    if M.rows == 0:
        return [coords.zero()] * M.cols
    aug = [r + [bi] for r, bi in zip(M.tolist(), b)]
    ech, pivots = echelon(aug, M.cols + 1)
    if pivots and pivots[-1] == M.cols:
        return NO_SOLUTION
    rhs = [ech[k][M.cols] for k in range(len(pivots))]
    return _back_substitute(ech, pivots, M.cols, rhs, {}, coords)


def solve_many(M: ExprMatrix, B: ExprMatrix) -> "ExprMatrix | _NoSolution":
    """Solve ``M X = B`` column by column with one elimination."""
    coords = M.coords
    if B.rows != M.rows:
        raise DimensionError(f"shapes {M.shape} and {B.shape} are incompatible")
    aug = [r + br for r, br in zip(M.tolist(), B.tolist())]
    ech, pivots = echelon(aug, M.cols + B.cols)
    main = [c for c in pivots if c < M.cols]
    if len(main) != len(pivots):
        return NO_SOLUTION
    cols = []
    for j in range(B.cols):
        rhs = [ech[k][M.cols + j] for k in range(len(main))]
        cols.append(_back_substitute(ech, main, M.cols, rhs, {}, coords))
    return ExprMatrix.from_columns(coords, cols, M.cols)


def inverse(M: ExprMatrix) -> ExprMatrix:
    if M.rows != M.cols:
        raise DimensionError(f"cannot invert non-square {M.shape} matrix")
    n = M.rows
    if n == 0:
        return M
    ech, pivots = echelon(M.tolist(), n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix has generic rank {len(pivots)} < {n}")
    X = solve_many(M, ExprMatrix.identity(M.coords, n))
    assert X is not NO_SOLUTION
    return X


def det(M: ExprMatrix) -> Expr:
    """Determinant by fraction-free elimination (sign tracked through swaps)."""
    if M.rows != M.cols:
        raise DimensionError("determinant of non-square matrix")
    n = M.rows
    if n == 0:
        return M.coords.one()
    a = M.tolist()
    sign = 1
    prev = None
    for k in range(n):
        piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
        if piv is None:
            return M.coords.zero()
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = p * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = v / prev if prev is not None else v
        prev = p
    return a[n - 1][n - 1] * sign
