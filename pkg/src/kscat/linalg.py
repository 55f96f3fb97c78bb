# KSCAT
# Copyright (C) 2025 The kscat authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""Exact sparse linear algebra over the rationals.

Elimination is fraction-free Gauss-Jordan: rows are scaled to integers, and each
pivot step divides exactly by the previous pivot. The reduced form has every
pivot equal to a common denominator.

Copyright (c) The kscat authors
"""

import dataclasses
import math
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

Rational = Union[int, Fraction]
Vector = Tuple[Fraction, ...]


def zero_vector(size: int) -> Vector:
    return (Fraction(0),) * size


def vector(values: Sequence[Rational]) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a: Sequence[Rational], b: Sequence[Rational]) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"Vector lengths differ, got {len(a)} and {len(b)}.")
    return sum((Fraction(x) * y for x, y in zip(a, b) if x and y), Fraction(0))


def combine(coefficients: Sequence[Rational], vectors: Sequence[Vector], size: int) -> Vector:
    """Returns the linear combination of `vectors` with `coefficients`."""
    result = [Fraction(0)] * size
    for c, v in zip(coefficients, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    result[i] += c * x
    return tuple(result)


@dataclasses.dataclass(frozen=True)
class RationalMatrix:
    """A sparse matrix with rational entries.

    Attributes:
        rows: The number of rows.
        cols: The number of columns.
        entries: Nonzero entries keyed by `(row, col)`.
    """

    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Fraction] = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Invalid matrix shape, got {(self.rows, self.cols)}.")
        entries = {}
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(
                    f"Entry {(i, j)} is outside a matrix of shape {self.shape}."
                )
            if value:
                entries[(i, j)] = Fraction(value)
        object.__setattr__(self, "entries", entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls(size, size, {(i, i): Fraction(1) for i in range(size)})

    @classmethod
    def from_dense(
        cls, values: Sequence[Sequence[Rational]], cols: Optional[int] = None
    ) -> "RationalMatrix":
        if cols is None:
            cols = len(values[0]) if values else 0
        if any(len(row) != cols for row in values):
            raise ValueError("All rows of a dense matrix must have the same length.")
        return cls(
            len(values),
            cols,
            {(i, j): Fraction(v) for i, row in enumerate(values) for j, v in enumerate(row)},
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Rational]], rows: int) -> "RationalMatrix":
        if any(len(c) != rows for c in columns):
            raise ValueError(f"All columns must have length {rows}.")
        return cls(
            rows,
            len(columns),
            {(i, j): Fraction(v) for j, col in enumerate(columns) for i, v in enumerate(col)},
        )

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            dense[i][j] = value
        return dense

    def column(self, j: int) -> Vector:
        col = [Fraction(0)] * self.rows
        for (i, jj), value in self.entries.items():
            if jj == j:
                col[i] = value
        return tuple(col)

    def columns(self) -> List[Vector]:
        cols = [[Fraction(0)] * self.rows for _ in range(self.cols)]
        for (i, j), value in self.entries.items():
            cols[j][i] = value
        return [tuple(c) for c in cols]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    def is_zero(self) -> bool:
        return not self.entries

    def apply(self, x: Sequence[Rational]) -> Vector:
        if len(x) != self.cols:
            raise ValueError(
                f"Vector of length {len(x)} does not match matrix shape {self.shape}."
            )
        result = [Fraction(0)] * self.rows
        for (i, j), value in self.entries.items():
            if x[j]:
                result[i] += value * x[j]
        return tuple(result)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply shapes {self.shape} and {other.shape}.")
        by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (k, j), value in other.entries.items():
            by_row.setdefault(k, []).append((j, value))
        entries: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                entries[(i, j)] = entries.get((i, j), 0) + a * b
        return RationalMatrix(self.rows, other.cols, entries)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Cannot add shapes {self.shape} and {other.shape}.")
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries.get(key, 0) + value
        return RationalMatrix(self.rows, self.cols, entries)

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, scalar: Rational) -> "RationalMatrix":
        return RationalMatrix(
            self.rows, self.cols, {k: v * scalar for k, v in self.entries.items()}
        )

    def select_columns(self, columns: Sequence[int]) -> "RationalMatrix":
        position = {c: n for n, c in enumerate(columns)}
        return RationalMatrix(
            self.rows,
            len(columns),
            {(i, position[j]): v for (i, j), v in self.entries.items() if j in position},
        )


def vstack(top: RationalMatrix, bottom: RationalMatrix) -> RationalMatrix:
    if top.cols != bottom.cols:
        raise ValueError(f"Cannot stack shapes {top.shape} and {bottom.shape}.")
    entries = dict(top.entries)
    entries.update({(i + top.rows, j): v for (i, j), v in bottom.entries.items()})
    return RationalMatrix(top.rows + bottom.rows, top.cols, entries)


def hstack(left: RationalMatrix, right: RationalMatrix) -> RationalMatrix:
    if left.rows != right.rows:
        raise ValueError(f"Cannot join shapes {left.shape} and {right.shape}.")
    entries = dict(left.entries)
    entries.update({(i, j + left.cols): v for (i, j), v in right.entries.items()})
    return RationalMatrix(left.rows, left.cols + right.cols, entries)


# -----------------------------------------------------------------------------
# Elimination.
# -----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Echelon:
    """A reduced row echelon form with integer rows over a common denominator.

    Attributes:
        rows: The nonzero reduced rows; `rows[k][pivots[k]] == denominator`.
        denominator: The common pivot value.
        pivots: The pivot column of each row, increasing.
        cols: The number of columns.
    """

    rows: Tuple[Dict[int, int], ...]
    denominator: int
    pivots: Tuple[int, ...]
    cols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> Tuple[int, ...]:
        pivots = set(self.pivots)
        return tuple(c for c in range(self.cols) if c not in pivots)


def _integer_rows(matrix: RationalMatrix) -> List[Dict[int, int]]:
    rows: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), value in matrix.entries.items():
        rows.setdefault(i, {})[j] = value
    result = []
    for i in sorted(rows):
        row = rows[i]
        scale = math.lcm(*(v.denominator for v in row.values()))
        result.append({j: int(v * scale) for j, v in row.items()})
    return result


def _exact_quotient(value: int, divisor: int) -> int:
    quotient, remainder = divmod(value, divisor)
    if remainder:
        raise ArithmeticError(
            f"Inexact division {value} / {divisor} during fraction-free elimination."
        )
    return quotient


def echelon_form(matrix: RationalMatrix) -> Echelon:
    """Computes the reduced row echelon form by fraction-free Gauss-Jordan."""
    rows = _integer_rows(matrix)
    pivots: List[int] = []
    divisor = 1
    r = 0
    for c in range(matrix.cols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i].get(c, 0)), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot_row = rows[r]
        a = pivot_row[c]
        for i in range(len(rows)):
            if i == r:
                continue
            row = rows[i]
            b = row.get(c, 0)
            updated = {}
            for col in set(row) | set(pivot_row):
                value = a * row.get(col, 0) - b * pivot_row.get(col, 0)
                if value:
                    updated[col] = _exact_quotient(value, divisor)
            rows[i] = updated
        divisor = a
        pivots.append(c)
        r += 1
    # Earlier pivot rows were rescaled along the way; all pivots now equal `divisor`.
    return Echelon(tuple(rows[:r]), divisor, tuple(pivots), matrix.cols)


def rank(matrix: RationalMatrix) -> int:
    return echelon_form(matrix).rank


def kernel_basis(matrix: RationalMatrix) -> List[Vector]:
    """Returns a basis of the null space, one vector per free column.

    Each vector has a one in its free column and zeros in the other free columns.
    """
    echelon = echelon_form(matrix)
    basis = []
    for f in echelon.free_columns():
        x = [Fraction(0)] * matrix.cols
        x[f] = Fraction(1)
        for row, pc in zip(echelon.rows, echelon.pivots):
            if row.get(f, 0):
                x[pc] = -Fraction(row[f], echelon.denominator)
        basis.append(tuple(x))
    return basis


def image_basis(matrix: RationalMatrix) -> List[Vector]:
    """Returns the pivot columns of `matrix`, a basis of its column space."""
    echelon = echelon_form(matrix)
    columns = matrix.columns()
    return [columns[c] for c in echelon.pivots]


@dataclasses.dataclass(frozen=True)
class PreimageResult:
    """The outcome of solving `M x = t`.

    Attributes:
        solution: A solution with zero free variables, or `None` if inconsistent.
        certificate: When inconsistent, a vector `y` with `y M = 0` and `y . t != 0`.
    """

    solution: Optional[Vector]
    certificate: Optional[Vector] = None

    @property
    def solvable(self) -> bool:
        return self.solution is not None


def preimage(
    matrix: RationalMatrix, target: Sequence[Rational], reverse: bool = False
) -> PreimageResult:
    """Solves `matrix @ x = target` exactly.

    Args:
        matrix: The coefficient matrix.
        target: The right-hand side, of length `matrix.rows`.
        reverse: If `True`, pivots are chosen from the last column backwards, which
            selects a different particular solution.

    Returns:
        The `PreimageResult`, holding either a solution or an inconsistency certificate.
    """
    if len(target) != matrix.rows:
        raise ValueError(
            f"Target of length {len(target)} does not match matrix shape {matrix.shape}."
        )
    order = list(range(matrix.cols))
    if reverse:
        order.reverse()
    permuted = matrix.select_columns(order)
    augmented = hstack(permuted, RationalMatrix.from_columns([target], matrix.rows))
    echelon = echelon_form(augmented)
    if matrix.cols in echelon.pivots:
        return PreimageResult(None, _certificate(matrix, target))
    permuted_solution = [Fraction(0)] * matrix.cols
    for row, pc in zip(echelon.rows, echelon.pivots):
        permuted_solution[pc] = Fraction(row.get(matrix.cols, 0), echelon.denominator)
    solution = [Fraction(0)] * matrix.cols
    for position, column in enumerate(order):
        solution[column] = permuted_solution[position]
    return PreimageResult(tuple(solution))


def _certificate(matrix: RationalMatrix, target: Sequence[Rational]) -> Vector:
    for y in kernel_basis(matrix.transpose()):
        if dot(y, target):
            return y
    raise ArithmeticError("Inconsistent system has no left-kernel certificate.")


def is_in_span(vectors: Sequence[Vector], target: Sequence[Rational]) -> bool:
    size = len(target)
    return preimage(RationalMatrix.from_columns(vectors, size), target).solvable
