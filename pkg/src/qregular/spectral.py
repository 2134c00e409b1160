"""Eigenstructure of C and joint spectral radius of the matrix family.

Eigenvalues are obtained from an exact factorization of the characteristic
polynomial over Q.  Rational roots are exact; roots of nonlinear irreducible
factors are computed numerically but keep their minimal polynomial, so Jordan
block sizes are always computed with exact ranks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np
import sympy

from .rational import RationalMatrix, format_rational

__all__ = [
    "Eigenvalue",
    "EigenEntry",
    "EigenStructure",
    "BlockStructure",
    "JsrResult",
    "GrowthAssessment",
    "NumericalAmbiguityError",
    "char_poly",
    "poly_eval_matrix",
    "eigenvalues",
    "eigenstructure",
    "jordan_index",
    "spectral_radius",
    "scc_block_structure",
    "joint_spectral_radius",
    "simple_growth_check",
    "CLUSTER_TOL",
    "COLLAPSE_TOL",
    "DEFAULT_PRODUCT_LENGTH",
]

CLUSTER_TOL = 1e-9
COLLAPSE_TOL = 1e-12
DEFAULT_PRODUCT_LENGTH = 8


class NumericalAmbiguityError(ArithmeticError):
    """Two numerically computed eigenvalue clusters are too close to separate."""


def char_poly(M: RationalMatrix) -> list[Fraction]:
    """Coefficients of ``det(xI - M)``, highest degree first (monic).

    Faddeev-LeVerrier recursion over Q.
    """
    if not M.is_square():
        raise ValueError("characteristic polynomial needs a square matrix")
    n = M.rows
    coeffs = [Fraction(1)]
    identity = RationalMatrix.identity(n)
    Mk = RationalMatrix.zeros(n, n)
    for k in range(1, n + 1):
        Mk = M @ Mk + identity * coeffs[-1]
        coeffs.append(-(M @ Mk).trace() / k)
    return coeffs


def poly_eval_matrix(coeffs: Sequence[Fraction], M: RationalMatrix) -> RationalMatrix:
    """Horner evaluation of a polynomial (highest degree first) at a matrix."""
    n = M.rows
    result = RationalMatrix.zeros(n, n)
    identity = RationalMatrix.identity(n)
    for c in coeffs:
        result = result @ M + identity * c
    return result


@dataclass(frozen=True)
class Eigenvalue:
    """An eigenvalue together with its minimal polynomial over Q.

    ``value`` is a ``Fraction`` when ``exact``; otherwise a complex number.
    """

    value: Fraction | complex
    exact: bool
    minpoly: tuple[Fraction, ...]

    @property
    def modulus(self) -> float:
        return abs(complex(self.value)) if not self.exact else abs(float(self.value))

    @property
    def exact_modulus(self) -> Fraction | None:
        return abs(self.value) if self.exact else None

    def __complex__(self) -> complex:
        return complex(self.value)

    def render(self) -> str:
        if self.exact:
            return format_rational(self.value)
        z = complex(self.value)
        if abs(z.imag) < CLUSTER_TOL * max(1.0, abs(z)):
            return f"{z.real:.12g}"
        return f"{z.real:.12g}{z.imag:+.12g}i"


@dataclass(frozen=True)
class EigenEntry:
    eigenvalue: Eigenvalue
    algebraic_multiplicity: int
    jordan_index: int | None = None


@dataclass(frozen=True)
class EigenStructure:
    entries: tuple[EigenEntry, ...]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def find(self, value) -> EigenEntry | None:
        """Entry whose eigenvalue equals ``value`` (exactly, or numerically)."""
        if isinstance(value, Eigenvalue):
            value = value.value
        for entry in self.entries:
            ev = entry.eigenvalue
            if ev.exact and isinstance(value, (int, Fraction)):
                if ev.value == value:
                    return entry
            elif not isinstance(value, (int, Fraction)) or not ev.exact:
                z = complex(value)
                if abs(complex(ev.value) - z) <= 10 * CLUSTER_TOL * max(1.0, abs(z)):
                    return entry
        return None

    def as_dict(self) -> dict:
        """Mapping from the exact eigenvalue (or complex value) to its entry."""
        return {e.eigenvalue.value: e for e in self.entries}

    @property
    def dimension(self) -> int:
        return sum(e.algebraic_multiplicity for e in self.entries)


def _factor(coeffs: Sequence[Fraction]) -> list[tuple[tuple[Fraction, ...], int]]:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x,
                      domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, mult in factors:
        lc = f.LC()
        monic = tuple(Fraction(int(c.p), int(c.q)) / Fraction(int(lc.p), int(lc.q))
                      for c in f.all_coeffs())
        out.append((monic, mult))
    return out


def _numeric_roots(minpoly: tuple[Fraction, ...]) -> list[complex]:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in minpoly], x)
    return [complex(r) for r in poly.nroots(n=30, maxsteps=200)]


def eigenvalues(M: RationalMatrix) -> EigenStructure:
    """Eigenvalues with algebraic multiplicities (``jordan_index`` left unset).

    Ordered by decreasing modulus, then by decreasing real part.
    """
    coeffs = char_poly(M)
    entries: list[EigenEntry] = []
    for minpoly, mult in _factor(coeffs):
        if len(minpoly) == 2:
            ev = Eigenvalue(-minpoly[1], True, minpoly)
            entries.append(EigenEntry(ev, mult))
        else:
            for z in _numeric_roots(minpoly):
                if abs(z.imag) <= CLUSTER_TOL * max(1.0, abs(z)):
                    z = complex(z.real, 0.0)
                entries.append(EigenEntry(Eigenvalue(z, False, minpoly), mult))
    numeric = [complex(e.eigenvalue.value) for e in entries]
    for (i, a), (j, b) in itertools.combinations(enumerate(numeric), 2):
        if entries[i].eigenvalue.exact and entries[j].eigenvalue.exact:
            continue
        if abs(a - b) <= 10 * CLUSTER_TOL * max(1.0, abs(a), abs(b)):
            raise NumericalAmbiguityError(
                f"numerically ambiguous clustering: eigenvalues {a} and {b} are too close"
            )
    entries.sort(key=lambda e: (-e.eigenvalue.modulus, -complex(e.eigenvalue.value).real,
                                -complex(e.eigenvalue.value).imag))
    return EigenStructure(tuple(entries))


def _as_eigenvalue(M: RationalMatrix, value) -> Eigenvalue | None:
    if isinstance(value, Eigenvalue):
        return value
    if isinstance(value, (int, Fraction)):
        v = Fraction(value)
        return Eigenvalue(v, True, (Fraction(1), -v))
    entry = eigenvalues(M).find(value)
    return entry.eigenvalue if entry is not None else None


def jordan_index(M: RationalMatrix, value) -> int:
    """Size ``m_M(lambda)`` of the largest Jordan block of ``M`` at ``lambda``.

    Returns 0 when ``lambda`` is not an eigenvalue.  For irrational eigenvalues
    the nullity chain of ``p(M)^j`` with ``p`` the minimal polynomial is used;
    all Galois conjugates share the same Jordan structure, so this is exact.
    """
    if not M.is_square():
        raise ValueError("Jordan index needs a square matrix")
    ev = _as_eigenvalue(M, value)
    if ev is None:
        return 0
    N = poly_eval_matrix(ev.minpoly, M)
    power = N
    previous = 0
    j = 0
    while True:
        nullity = power.nullity()
        if nullity == previous:
            return j
        previous = nullity
        j += 1
        power = power @ N


def eigenstructure(M: RationalMatrix) -> EigenStructure:
    """:func:`eigenvalues` with Jordan indices filled in."""
    entries = []
    for e in eigenvalues(M):
        m = jordan_index(M, e.eigenvalue)
        entries.append(EigenEntry(e.eigenvalue, e.algebraic_multiplicity, m))
    return EigenStructure(tuple(entries))


def spectral_radius(spectrum: EigenStructure) -> float:
    return max((e.eigenvalue.modulus for e in spectrum), default=0.0)


# -- block triangularization -----------------------------------------------

@dataclass(frozen=True)
class BlockStructure:
    """Coordinate permutation making a family block upper triangular.

    ``permutation[new] = old``; ``blocks`` lists the original indices of each
    diagonal block in the new order; ``spans`` gives half-open index ranges in
    permuted coordinates.
    """

    permutation: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    spans: tuple[tuple[int, int], ...]


def support_graph(family: Sequence[RationalMatrix]) -> nx.DiGraph:
    dim = family[0].rows
    graph = nx.DiGraph()
    graph.add_nodes_from(range(dim))
    for M in family:
        for i in range(dim):
            for j in range(dim):
                if i != j and M.nonzero(i, j):
                    graph.add_edge(i, j)
    return graph


def _check_family(family: Sequence[RationalMatrix]) -> int:
    if not family:
        raise ValueError("empty matrix family")
    dim = family[0].rows
    for M in family:
        if not M.is_square() or M.rows != dim:
            raise ValueError("family members must be square of equal dimension")
    return dim


def scc_block_structure(family: Sequence[RationalMatrix]) -> BlockStructure:
    _check_family(family)
    graph = support_graph(family)
    condensed = nx.condensation(graph)
    members = {c: tuple(sorted(condensed.nodes[c]["members"])) for c in condensed.nodes}
    order = nx.lexicographical_topological_sort(condensed, key=lambda c: members[c][0])
    blocks = tuple(members[c] for c in order)
    permutation = tuple(i for b in blocks for i in b)
    spans = []
    start = 0
    for b in blocks:
        spans.append((start, start + len(b)))
        start += len(b)
    return BlockStructure(permutation, blocks, tuple(spans))


# -- joint spectral radius ---------------------------------------------------

@dataclass(frozen=True)
class JsrResult:
    lower: float
    upper: float
    exact: bool
    witness: str
    exact_value: Fraction | None = None
    block_values: tuple = field(default=(), compare=False)

    @property
    def value(self) -> Fraction | float:
        """The joint spectral radius; only defined when ``exact``."""
        if not self.exact:
            raise ValueError(f"joint spectral radius only bracketed in [{self.lower}, {self.upper}]")
        return self.exact_value if self.exact_value is not None else self.lower


def _block_bounds(mats: list[np.ndarray], length: int) -> tuple[float, float]:
    """Product bounds for one irreducible diagonal block."""
    lower = 0.0
    level = [np.eye(mats[0].shape[0])]
    upper = 0.0
    for ell in range(1, length + 1):
        level = [P @ M for P in level for M in mats]
        for P in level:
            rho = float(np.max(np.abs(np.linalg.eigvals(P))))
            lower = max(lower, rho ** (1.0 / ell))
        if ell == length:
            for P in level:
                norm = float(np.max(np.sum(np.abs(P), axis=1)))
                upper = max(upper, norm ** (1.0 / ell))
    # both bounds are valid; rounding alone can invert them by an ulp
    return lower, max(upper, lower)


def joint_spectral_radius(family: Sequence[RationalMatrix],
                          product_length: int = DEFAULT_PRODUCT_LENGTH) -> JsrResult:
    """Joint spectral radius via block triangularization of the support.

    One-dimensional diagonal blocks contribute their largest modulus exactly.
    Larger blocks are bracketed by spectral radii of products of length at
    most ``product_length`` (lower) and row-sum norms of products of length
    exactly ``product_length`` (upper).
    """
    _check_family(family)
    structure = scc_block_structure(family)
    exact_part: Fraction | None = None
    exact_where = None
    numeric: list[tuple[tuple[int, ...], float, float]] = []
    block_values = []
    for block in structure.blocks:
        if len(block) == 1:
            i = block[0]
            value = max(abs(M[i, i]) for M in family)
            block_values.append((block, value, value))
            if exact_part is None or value > exact_part:
                exact_part, exact_where = value, i
        else:
            mats = [M.submatrix(block, block).to_numpy() for M in family]
            lo, hi = _block_bounds(mats, product_length)
            numeric.append((block, lo, hi))
            block_values.append((block, lo, hi))
    exact_float = float(exact_part) if exact_part is not None else 0.0
    lower = max([exact_float] + [lo for _, lo, _ in numeric])
    upper = max([exact_float] + [hi for _, _, hi in numeric])
    if exact_part is not None and all(hi <= exact_float for _, _, hi in numeric):
        return JsrResult(exact_float, exact_float, True,
                         f"diagonal entry at coordinate {exact_where}",
                         exact_part, tuple(block_values))
    collapsed = all(hi - lo <= COLLAPSE_TOL for _, lo, hi in numeric)
    if collapsed:
        return JsrResult(lower, upper, True,
                         "product bounds of non-trivial blocks coincide", None,
                         tuple(block_values))
    return JsrResult(lower, upper, False,
                     f"product bounds of length <= {product_length}", None, tuple(block_values))


@dataclass(frozen=True)
class GrowthAssessment:
    simple_growth: str  # "holds" or "unknown"
    reason: str

    @property
    def holds(self) -> bool:
        return self.simple_growth == "holds"


def simple_growth_check(family: Sequence[RationalMatrix]) -> GrowthAssessment:
    """Sufficient criterion for the simple growth property.

    Needs a family that triangularizes into 1x1 diagonal blocks.  Let ``P`` be
    the coordinates whose largest diagonal modulus equals the joint spectral
    radius.  Products grow like ``rho^k`` times a polynomial whose degree is
    bounded by the number of coordinates of ``P`` lying on a common path of
    the support graph minus one, so the property holds if no coordinate of
    ``P`` reaches another one.
    """
    dim = _check_family(family)
    structure = scc_block_structure(family)
    if any(len(b) > 1 for b in structure.blocks):
        return GrowthAssessment("unknown", "family is not triangularizable into 1x1 blocks")
    maxima = [max(abs(M[i, i]) for M in family) for i in range(dim)]
    rho = max(maxima)
    if rho == 0:
        return GrowthAssessment("holds", "all diagonal entries vanish; long products are zero")
    attained = [i for i in range(dim) if maxima[i] == rho]
    if len(attained) == 1:
        return GrowthAssessment(
            "holds", f"joint spectral radius {format_rational(rho)} attained only at coordinate "
                     f"{attained[0]}")
    graph = support_graph(family)
    for i, j in itertools.permutations(attained, 2):
        if nx.has_path(graph, i, j):
            return GrowthAssessment(
                "unknown",
                f"joint spectral radius {format_rational(rho)} attained at coordinates {i} and "
                f"{j}, which are linked in the support graph")
    return GrowthAssessment(
        "holds", f"joint spectral radius {format_rational(rho)} attained at coordinates "
                 f"{attained}, pairwise unlinked in the support graph")


def is_close(a: float, b: float, tol: float = CLUSTER_TOL) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
