"""Linear representations of summatory functions.

For ``Sigma x(N) = sum_{n<N} x(n)`` the right vector-valued sequence
``(Sigma v, v)`` satisfies

    Sigma v(qN + r) = C Sigma v(N) + B_r v(N),

with ``B_r = A_0 + ... + A_{r-1}`` and ``C = A_0 + ... + A_{q-1}``.  All
constructions assume ``A_0 w = w`` (see :func:`qregular.core.is_zero_consistent`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .core import LinearRepresentation, evaluate_prefix
from .rational import RationalMatrix

__all__ = [
    "SummationMatrices",
    "IteratedSummationRep",
    "summation_matrices",
    "summatory_rep",
    "iterated_summatory_rep",
    "naive_iterated_summatory_rep",
    "direct_ksum",
    "prefix_sums",
]


@dataclass(frozen=True)
class SummationMatrices:
    B: tuple[RationalMatrix, ...]
    C: RationalMatrix


def summation_matrices(rep: LinearRepresentation) -> SummationMatrices:
    dim = rep.dim
    B = [RationalMatrix.zeros(dim, dim)]
    for A in rep.matrices[:-1]:
        B.append(B[-1] + A)
    C = B[-1] + rep.matrices[-1]
    return SummationMatrices(tuple(B), C)


def summatory_rep(rep: LinearRepresentation) -> LinearRepresentation:
    """Representation of ``Sigma x`` with state ``(Sigma v, v)`` of dimension 2D."""
    dim = rep.dim
    sm = summation_matrices(rep)
    zero = RationalMatrix.zeros(dim, dim)
    matrices = tuple(
        RationalMatrix.from_blocks([[sm.C, B_r], [zero, A_r]])
        for B_r, A_r in zip(sm.B, rep.matrices)
    )
    u = RationalMatrix.from_blocks([[rep.u, RationalMatrix.zeros(1, dim)]])
    w = RationalMatrix.from_blocks([[RationalMatrix.zeros(dim, 1)], [rep.w]])
    return LinearRepresentation(rep.q, u, matrices, w)


@dataclass(frozen=True)
class IteratedSummationRep:
    """Compact representation of ``Sigma^k x`` with state ``(Sigma^k v, ..., Sigma v, v)``.

    ``blocks[m-1][r]`` is the ``D x (m+1)D`` top block row used when the
    ``m``-th summation layer was added, i.e. the coefficients of
    ``Sigma^m v(qN + r)`` in terms of ``(Sigma^m v, ..., v)(N)``.  Its first
    block is ``q^{m-1} C``; the remaining ones are the matrices ``M_{m,j}``.
    """

    k: int
    D: int
    rep: LinearRepresentation
    blocks: tuple[tuple[RationalMatrix, ...], ...]

    def recurrence_matrix(self, m: int, j: int, r: int) -> RationalMatrix:
        """``M_{m,j}`` for digit ``r``: the coefficient of ``Sigma^j v(N)``."""
        if not 1 <= m <= self.k or not 0 <= j < m:
            raise IndexError("need 1 <= m <= k and 0 <= j < m")
        top = self.blocks[m - 1][r]
        col = (m - j) * self.D
        return top.block(0, self.D, col, col + self.D)

    def diagonal_block(self, r: int, index: int) -> RationalMatrix:
        start = index * self.D
        return self.rep.matrices[r].block(start, start + self.D, start, start + self.D)


def iterated_summatory_rep(rep: LinearRepresentation, k: int) -> IteratedSummationRep:
    """Build the ``(k+1)D``-dimensional representation of ``Sigma^k x``.

    Each step applies :func:`summatory_rep` to the current stacked
    representation and folds the duplicated rows: the doubled state
    ``(Sigma^{m+1} v, Sigma^m v, ..., Sigma v | Sigma^m v, ..., v)`` repeats
    ``Sigma^m v, ..., Sigma v``, so the coefficients acting on the repeated
    copies are merged into one column block and only the new top block row
    is kept.
    """
    if k < 1:
        raise ValueError("summation order k must be at least 1")
    dim = rep.dim
    current = rep
    blocks: list[tuple[RationalMatrix, ...]] = []
    for m in range(k):
        layers = m + 1  # blocks in the current state
        sm = summation_matrices(current)
        size = layers * dim
        tops = []
        new_matrices = []
        for B_r, A_r in zip(sm.B, current.matrices):
            c_top = sm.C.block(0, dim, 0, size)
            b_top = B_r.block(0, dim, 0, size)
            # c_top acts on (Sigma^{m+1}v, Sigma^m v, ..., Sigma v) and b_top on
            # (Sigma^m v, ..., v); shift b_top one block right to align.
            top = RationalMatrix.from_blocks([[c_top, RationalMatrix.zeros(dim, dim)]]) + \
                RationalMatrix.from_blocks([[RationalMatrix.zeros(dim, dim), b_top]])
            tops.append(top)
            lower = RationalMatrix.from_blocks([[RationalMatrix.zeros(size, dim), A_r]])
            new_matrices.append(RationalMatrix.from_blocks([[top], [lower]]))
        u = RationalMatrix.from_blocks([[rep.u, RationalMatrix.zeros(1, size)]])
        w = RationalMatrix.from_blocks([[RationalMatrix.zeros(dim, 1)], [current.w]])
        current = LinearRepresentation(rep.q, u, tuple(new_matrices), w)
        blocks.append(tuple(tops))
    return IteratedSummationRep(k, dim, current, tuple(blocks))


def naive_iterated_summatory_rep(rep: LinearRepresentation, k: int) -> LinearRepresentation:
    """Apply :func:`summatory_rep` ``k`` times (dimension ``2^k D``)."""
    for _ in range(k):
        rep = summatory_rep(rep)
    return rep


def prefix_sums(values: list[Fraction]) -> list[Fraction]:
    """``[Sigma y(0), ..., Sigma y(len-1)]`` where ``Sigma y(N) = sum_{n<N} y(n)``."""
    return [Fraction(0)] + list(accumulate(values))[:-1] if values else []


def direct_ksum(rep: LinearRepresentation, k: int, N: int) -> Fraction:
    """``Sigma^k x(N)`` by ``k`` rounds of literal prefix summation."""
    if k < 0:
        raise ValueError("k must be non-negative")
    values = evaluate_prefix(rep, N + 1)
    for _ in range(k):
        values = prefix_sums(values)
    return values[N]
