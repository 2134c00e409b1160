"""Exact rational scalars and dense matrices.

Matrices keep integer numerators over one common positive denominator, so
products and sums reduce to integer arithmetic followed by a single gcd
normalization.  Entries are exposed as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = ["RationalMatrix", "parse_rational", "format_rational", "to_fraction"]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (base 10, optional sign) into a Fraction.

    A leading Unicode minus sign is accepted as well as ASCII ``-``.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse rational from {type(text).__name__}")
    normalized = text.replace("−", "-")
    match = _RATIONAL_RE.match(normalized)
    if match is None:
        raise ValueError(f"not a rational number: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        # floats are accepted only when they are exact binary rationals
        return Fraction(value)
    return Fraction(value)


class RationalMatrix:
    """Immutable dense matrix over the rationals.

    Construct from nested rows of anything convertible to ``Fraction``::

        >>> RationalMatrix([[1, "1/2"], [0, 2]]).entries
        (Fraction(1, 1), Fraction(1, 2), Fraction(0, 1), Fraction(2, 1))
    """

    __slots__ = ("rows", "cols", "_num", "_den", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = [[to_fraction(x) for x in row] for row in rows]
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        den = 1
        for row in data:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
        num = tuple(tuple(x.numerator * (den // x.denominator) for x in row) for row in data)
        self._init_raw(nrows, ncols, num, den)

    def _init_raw(self, nrows: int, ncols: int, num: tuple, den: int) -> None:
        g = den
        for row in num:
            if g == 1:
                break
            g = math.gcd(g, *row)
        if g != 1:
            num = tuple(tuple(x // g for x in row) for row in num)
            den //= g
        setattr_ = object.__setattr__
        setattr_(self, "rows", nrows)
        setattr_(self, "cols", ncols)
        setattr_(self, "_num", num)
        setattr_(self, "_den", den)
        setattr_(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def _raw(cls, nrows: int, ncols: int, num: tuple, den: int) -> "RationalMatrix":
        obj = cls.__new__(cls)
        obj._init_raw(nrows, ncols, num, den)
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls._raw(rows, cols, tuple((0,) * cols for _ in range(rows)), 1)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls._raw(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1)

    @classmethod
    def column(cls, values: Sequence) -> "RationalMatrix":
        return cls([[v] for v in values])

    @classmethod
    def row_vector(cls, values: Sequence) -> "RationalMatrix":
        return cls([list(values)])

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> "RationalMatrix":
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls([entries[i * cols:(i + 1) * cols] for i in range(rows)])

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence["RationalMatrix | None"]]) -> "RationalMatrix":
        """Assemble a block matrix; ``None`` stands for a zero block.

        Every block row needs at least one concrete block to fix its height,
        and likewise for block columns.
        """
        heights = []
        for brow in blocks:
            hs = {b.rows for b in brow if b is not None}
            if len(hs) != 1:
                raise ValueError("inconsistent or undetermined block row height")
            heights.append(hs.pop())
        widths = []
        for j in range(len(blocks[0])):
            ws = {brow[j].cols for brow in blocks if brow[j] is not None}
            if len(ws) != 1:
                raise ValueError("inconsistent or undetermined block column width")
            widths.append(ws.pop())
        den = 1
        for brow in blocks:
            for b in brow:
                if b is not None:
                    den = den * b._den // math.gcd(den, b._den)
        rows = []
        for bi, brow in enumerate(blocks):
            for i in range(heights[bi]):
                row: list[int] = []
                for bj, b in enumerate(brow):
                    if b is None:
                        row.extend([0] * widths[bj])
                    else:
                        scale = den // b._den
                        row.extend(x * scale for x in b._num[i])
                rows.append(tuple(row))
        return cls._raw(sum(heights), sum(widths), tuple(rows), den)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[Fraction, ...]:
        """Row-major entries."""
        return tuple(Fraction(x, self._den) for row in self._num for x in row)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return Fraction(self._num[i][j], self._den)

    def tolist(self) -> list[list[Fraction]]:
        return [[Fraction(x, self._den) for x in row] for row in self._num]

    def row(self, i: int) -> list[Fraction]:
        return [Fraction(x, self._den) for x in self._num[i]]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._num for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def nonzero(self, i: int, j: int) -> bool:
        return self._num[i][j] != 0

    def to_numpy(self, dtype=float):
        import numpy as np

        return np.array([[x / self._den for x in row] for row in self._num], dtype=dtype)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        num = tuple(tuple(self._num[i][j] for j in cols) for i in rows)
        return RationalMatrix._raw(len(rows), len(cols), num, self._den)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "RationalMatrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    # -- arithmetic -------------------------------------------------------

    def _check_same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        self._check_same_shape(other)
        d1, d2 = self._den, other._den
        g = math.gcd(d1, d2)
        s1, s2 = d2 // g, d1 // g
        num = tuple(
            tuple(a * s1 + b * s2 for a, b in zip(ra, rb)) for ra, rb in zip(self._num, other._num)
        )
        return RationalMatrix._raw(self.rows, self.cols, num, d1 * s1)

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(
            self.rows, self.cols, tuple(tuple(-x for x in row) for row in self._num), self._den
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "RationalMatrix":
        f = to_fraction(factor)
        num = tuple(tuple(x * f.numerator for x in row) for row in self._num)
        return RationalMatrix._raw(self.rows, self.cols, num, self._den * f.denominator)

    def __mul__(self, factor) -> "RationalMatrix":
        if isinstance(factor, RationalMatrix):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._num)) if other.rows else [()] * other.cols
        num = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self._num
        )
        return RationalMatrix._raw(self.rows, other.cols, num, self._den * other._den)

    def __pow__(self, exponent: int) -> "RationalMatrix":
        if not self.is_square() or exponent < 0:
            raise ValueError("only non-negative powers of square matrices")
        result = RationalMatrix.identity(self.rows)
        base = self
        while exponent:
            if exponent & 1:
                result = result @ base
            base = base @ base
            exponent >>= 1
        return result

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._raw(self.cols, self.rows, tuple(zip(*self._num)), self._den)

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def permute(self, perm: Sequence[int]) -> "RationalMatrix":
        """Return ``P M P^T`` for the permutation listing old indices in new order."""
        return self.submatrix(perm, perm)

    def rank(self) -> int:
        return len(_row_echelon(self.tolist()))

    def nullity(self) -> int:
        return self.cols - self.rank()

    def diagonal(self) -> list[Fraction]:
        return [Fraction(self._num[i][i], self._den) for i in range(min(self.rows, self.cols))]

    def trace(self) -> Fraction:
        return sum(self.diagonal(), Fraction(0))

    def is_upper_triangular(self) -> bool:
        return all(self._num[i][j] == 0 for i in range(self.rows) for j in range(min(i, self.cols)))

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._den == other._den and self._num == other._num

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.rows, self.cols, self._num, self._den)))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(
            "[" + ", ".join(format_rational(x) for x in row) + "]" for row in self.tolist()
        )
        return f"RationalMatrix([{body}])"


def _row_echelon(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Gaussian elimination over Q; returns the nonzero rows of an echelon form."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    pivot_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        p = rows[pivot_row][col]
        for r in range(pivot_row + 1, len(rows)):
            factor = rows[r][col]
            if factor != 0:
                f = factor / p
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows[:pivot_row]
