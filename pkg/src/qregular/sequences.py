"""A few standard linear representations used throughout tests and demos."""

from __future__ import annotations

from .core import LinearRepresentation

__all__ = [
    "binary_sum_of_digits",
    "thue_morse_pm",
    "zero_two_scalar",
    "nilpotent_example",
    "zero_sequence",
]


def binary_sum_of_digits() -> LinearRepresentation:
    """s_2(n), the number of ones in the binary expansion of n."""
    return LinearRepresentation.build(2, [1, 0], [[[1, 0], [0, 1]], [[1, 1], [0, 1]]], [0, 1])


def thue_morse_pm() -> LinearRepresentation:
    """(-1)^{s_2(n)}; its matrices sum to zero."""
    return LinearRepresentation.build(2, [1], [[[1]], [[-1]]], [1])


def zero_two_scalar() -> LinearRepresentation:
    """One-dimensional family ``A_0 = (0), A_1 = (2)``.

    Note ``A_0 w != w`` here; only the matrix family matters for its uses.
    """
    return LinearRepresentation.build(2, [1], [[[0]], [[2]]], [1])


def nilpotent_example() -> LinearRepresentation:
    """``C = A_0 + A_1`` is nonzero but nilpotent."""
    return LinearRepresentation.build(2, [1, 0], [[[0, 1], [0, 0]], [[0, 0], [0, 0]]], [0, 1])


def zero_sequence() -> LinearRepresentation:
    return LinearRepresentation.build(2, [1], [[[1]], [[1]]], [0])
