"""Linear representations of q-regular sequences and their evaluation.

A linear representation ``(u, A_0..A_{q-1}, w)`` defines

    x(n) = u A_{n_0} A_{n_1} ... A_{n_{l-1}} w

where ``n_0`` is the least significant base-q digit of ``n``.  The right
vector-valued sequence is ``v(n) = A_{n_0} ... A_{n_{l-1}} w`` with
``v(0) = w``.

The summation constructions downstream additionally need ``v(0) = A_0 v(0)``,
i.e. ``A_0 w = w``; see :func:`is_zero_consistent`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .rational import RationalMatrix, format_rational, parse_rational

__all__ = [
    "LinearRepresentation",
    "RepresentationError",
    "digits",
    "evaluate",
    "evaluate_prefix",
    "evaluate_vector",
    "evaluate_vector_prefix",
    "is_zero_consistent",
    "validate",
    "load_representation",
    "dump_representation",
    "representation_to_dict",
    "representation_from_dict",
]


class RepresentationError(ValueError):
    """A linear representation violates its dimension invariants."""


def digits(n: int, q: int) -> list[int]:
    """Base-``q`` digits of ``n``, least significant first; ``digits(0, q) == []``."""
    if q < 2:
        raise ValueError("base must be at least 2")
    if n < 0:
        raise ValueError("n must be non-negative")
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return out


@dataclass(frozen=True, eq=True)
class LinearRepresentation:
    q: int
    u: RationalMatrix
    matrices: tuple[RationalMatrix, ...]
    w: RationalMatrix

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))

    @classmethod
    def build(cls, q: int, u: Sequence, matrices: Sequence, w: Sequence,
              check: bool = True) -> "LinearRepresentation":
        """Convenience constructor from plain nested lists."""
        rep = cls(
            q,
            RationalMatrix.row_vector(u),
            tuple(m if isinstance(m, RationalMatrix) else RationalMatrix(m) for m in matrices),
            RationalMatrix.column(w),
        )
        if check:
            problem = validate(rep)
            if problem is not None:
                raise RepresentationError(problem)
        return rep

    @property
    def dim(self) -> int:
        return self.u.cols

    # the dimension is often written D
    D = dim


def validate(rep: LinearRepresentation) -> str | None:
    """Return the first dimension-invariant violation, or ``None`` if fine."""
    if not isinstance(rep.q, int) or rep.q < 2:
        return f"base q={rep.q} must be an integer >= 2"
    if rep.u.rows != 1:
        return f"u must be a row vector, got shape {rep.u.shape}"
    dim = rep.u.cols
    if dim < 1:
        return "dimension must be at least 1"
    if len(rep.matrices) != rep.q:
        return f"expected {rep.q} matrices, found {len(rep.matrices)}"
    for r, m in enumerate(rep.matrices):
        if not m.is_square():
            return f"matrix A_{r} is not square: shape {m.shape}"
        if m.rows != dim:
            return f"matrix A_{r} dimension {m.rows} ≠ D={dim}"
    if rep.w.cols != 1:
        return f"w must be a column vector, got shape {rep.w.shape}"
    if rep.w.rows != dim:
        return f"w dimension {rep.w.rows} ≠ D={dim}"
    return None


def is_zero_consistent(rep: LinearRepresentation) -> bool:
    """Whether ``A_0 w = w``, so that ``v(q*0 + 0) = A_0 v(0)`` holds at n=0."""
    return rep.matrices[0] @ rep.w == rep.w


def evaluate_vector(rep: LinearRepresentation, n: int) -> RationalMatrix:
    """The right vector-valued sequence ``v(n)`` as a ``D x 1`` matrix."""
    if n < 0:
        raise ValueError("n must be non-negative")
    v = rep.w
    for d in reversed(digits(n, rep.q)):
        v = rep.matrices[d] @ v
    return v


def evaluate(rep: LinearRepresentation, n: int) -> Fraction:
    return (rep.u @ evaluate_vector(rep, n))[0, 0]


def evaluate_vector_prefix(rep: LinearRepresentation, N: int) -> list[RationalMatrix]:
    """``[v(0), ..., v(N-1)]`` via ``v(qm + r) = A_r v(m)`` for ``qm + r >= 1``."""
    out: list[RationalMatrix] = []
    if N <= 0:
        return out
    out.append(rep.w)
    q = rep.q
    for n in range(1, N):
        m, r = divmod(n, q)
        out.append(rep.matrices[r] @ out[m])
    return out


def evaluate_prefix(rep: LinearRepresentation, N: int) -> list[Fraction]:
    """``[x(0), ..., x(N-1)]`` by a shared-prefix traversal."""
    return [(rep.u @ v)[0, 0] for v in evaluate_vector_prefix(rep, N)]


# -- file format ------------------------------------------------------------

def representation_to_dict(rep: LinearRepresentation) -> dict:
    return {
        "q": rep.q,
        "dim": rep.dim,
        "u": [format_rational(x) for x in rep.u.entries],
        "matrices": [[[format_rational(x) for x in row] for row in m.tolist()]
                     for m in rep.matrices],
        "w": [format_rational(x) for x in rep.w.entries],
    }


def representation_from_dict(data: dict) -> LinearRepresentation:
    try:
        q = data["q"]
        dim = data["dim"]
        u = [parse_rational(x) for x in data["u"]]
        matrices = data["matrices"]
        w = [parse_rational(x) for x in data["w"]]
    except KeyError as exc:
        raise RepresentationError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(q, int) or not isinstance(dim, int):
        raise RepresentationError("q and dim must be integers")
    parsed = []
    for r, m in enumerate(matrices):
        if not isinstance(m, list) or any(not isinstance(row, list) for row in m):
            raise RepresentationError(f"matrix {r} must be a list of rows")
        if any(len(row) != len(m[0]) for row in m) or not m:
            raise RepresentationError(f"matrix {r} has ragged or empty rows")
        parsed.append(RationalMatrix([[parse_rational(x) for x in row] for row in m]))
    rep = LinearRepresentation(
        q, RationalMatrix.row_vector(u), tuple(parsed), RationalMatrix.column(w)
    )
    problem = validate(rep)
    if problem is None and rep.dim != dim:
        problem = f"declared dim {dim} ≠ D={rep.dim}"
    if problem is not None:
        raise RepresentationError(problem)
    return rep


def load_representation(path: str | Path) -> LinearRepresentation:
    with open(path) as fh:
        return representation_from_dict(json.load(fh))


def dump_representation(rep: LinearRepresentation, path: str | Path | None = None) -> str:
    text = json.dumps(representation_to_dict(rep), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
