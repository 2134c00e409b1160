"""Asymptotic expansions of summatory functions of q-regular sequences.

For a representation ``(u, A, w)`` with ``C = sum_r A_r``,

    Sigma x(N) = sum_{|lambda| > R} N^{log_q lambda}
                 sum_{k < m_C(lambda)} (log N)^k / k! Phi_{lambda k}({log_q N})
                 + O(N^{log_q R} (log N)^kappa),

where ``R`` is the joint spectral radius ``rho`` when the family has the
simple growth property and otherwise any value above ``rho`` that leaves no
eigenvalue modulus in ``(rho, R]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .core import LinearRepresentation, evaluate
from .rational import format_rational
from .spectral import (
    CLUSTER_TOL,
    DEFAULT_PRODUCT_LENGTH,
    EigenStructure,
    Eigenvalue,
    GrowthAssessment,
    JsrResult,
    eigenstructure,
    joint_spectral_radius,
    simple_growth_check,
)
from .summation import iterated_summatory_rep, summation_matrices, summatory_rep

__all__ = [
    "ErrorTerm",
    "Term",
    "AsymptoticExpansion",
    "FluctuationEstimate",
    "SmoothingResult",
    "InconclusiveJSRError",
    "TheoremHypothesisError",
    "NonConvergentError",
    "POLICIES",
    "choose_R",
    "expansion",
    "minimal_smoothing_order",
    "smoothing_analysis",
    "sample_fluctuation",
    "sample_fluctuations",
    "fourier_coefficients",
    "log_exponent",
]

POLICIES = ("geometric", "tight")
TIGHT_OFFSET = 0.01
DEFAULT_M_LIST = (8, 12, 16, 20, 24)


class InconclusiveJSRError(ArithmeticError):
    """The joint spectral radius interval straddles an eigenvalue modulus of C."""

    def __init__(self, message: str, interval: tuple[float, float]):
        super().__init__(message)
        self.interval = interval


class TheoremHypothesisError(ValueError):
    """A hypothesis of the smoothing theorem fails (``C = 0`` or nilpotent ``C``)."""


class NonConvergentError(ArithmeticError):
    """Empirical fluctuation samples do not settle as the scale grows."""


def log_exponent(value: Fraction | complex, q: int) -> tuple[str, complex | float]:
    """Symbolic and numeric ``log_q(value)`` (principal branch)."""
    if isinstance(value, Fraction) and value > 0:
        num, den = value.numerator, value.denominator
        for exp_sign, top, bottom in ((1, num, den), (-1, den, num)):
            if bottom == 1:
                j = 0
                while top % q == 0:
                    top //= q
                    j += 1
                if top == 1:
                    return str(exp_sign * j), float(exp_sign * j)
        return f"log_{q}({format_rational(value)})", math.log(value) / math.log(q)
    z = complex(value)
    numeric = cmath.log(z) / math.log(q)
    if isinstance(value, Fraction):
        label = format_rational(value)
    else:
        label = f"{z.real:.12g}{z.imag:+.12g}i" if z.imag else f"{z.real:.12g}"
    if abs(numeric.imag) < 1e-15:
        numeric = complex(numeric.real, 0.0)
    return f"log_{q}({label})", numeric


@dataclass(frozen=True)
class ErrorTerm:
    """``O(N^{log_q R} (log N)^log_power)``.

    ``base_exponent`` is ``log_q rho``; with ``epsilon_flag`` set the error is
    ``O(N^{log_q rho + eps})`` in the usual sense.
    """

    R: float
    R_exact: Fraction | None
    exponent: float
    log_power: int
    epsilon_flag: bool
    omitted: bool
    rho: float
    rho_exact: Fraction | None
    base_exponent: float
    kappa_empty: bool
    policy: str


@dataclass(frozen=True)
class Term:
    eigenvalue: Eigenvalue
    log_power: int
    exponent: complex | float
    exponent_symbolic: str

    @property
    def key(self):
        return (self.eigenvalue.value, self.log_power)


@dataclass(frozen=True)
class AsymptoticExpansion:
    q: int
    terms: tuple[Term, ...]
    error: ErrorTerm
    spectrum: EigenStructure
    jsr: JsrResult
    growth: GrowthAssessment

    @property
    def good(self) -> bool:
        return bool(self.terms)

    def term_keys(self) -> list[tuple]:
        return [t.key for t in self.terms]


def _compare_modulus(ev: Eigenvalue, bound_exact: Fraction | None, bound: float) -> int:
    """Sign of ``|ev| - bound``; exact whenever both sides are rational."""
    if ev.exact and bound_exact is not None:
        diff = abs(ev.value) - bound_exact
        return (diff > 0) - (diff < 0)
    m = ev.modulus
    if math.isclose(m, bound, rel_tol=CLUSTER_TOL, abs_tol=CLUSTER_TOL):
        return 0
    return 1 if m > bound else -1


def choose_R(rho: JsrResult, growth: GrowthAssessment, spectrum: EigenStructure,
             q: int = 2, policy: str = "geometric") -> tuple[float, Fraction | None, bool]:
    """Pick ``R`` for the error term; returns ``(R, R_exact or None, epsilon_flag)``.

    With simple growth ``R = rho``.  Otherwise ``R`` is the geometric mean of
    ``rho`` and the next larger eigenvalue modulus of ``C`` (``policy="geometric"``)
    or ``rho * q^0.01`` when that stays below it (``policy="tight"``); with no
    larger eigenvalue, ``rho * q^0.01``.  ``rho = 0`` uses ``R = 1`` capped
    below the smallest nonzero eigenvalue modulus, since ``R`` must be positive.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown R policy {policy!r}; choose from {POLICIES}")
    if rho.exact:
        rho_exact = rho.exact_value
        rho_float = float(rho.value)
        above = [e.eigenvalue.modulus for e in spectrum
                 if _compare_modulus(e.eigenvalue, rho_exact, rho_float) > 0]
    else:
        lo, hi = rho.lower, rho.upper
        for e in spectrum:
            m = e.eigenvalue.modulus
            if lo - CLUSTER_TOL <= m <= hi + CLUSTER_TOL:
                raise InconclusiveJSRError(
                    f"inconclusive JSR: interval [{lo:.12g}, {hi:.12g}] contains eigenvalue "
                    f"modulus {m:.12g}", (lo, hi))
        rho_exact, rho_float = None, hi
        above = [e.eigenvalue.modulus for e in spectrum if e.eigenvalue.modulus > hi]
    next_modulus = min(above) if above else None
    if rho.exact and growth.holds and rho_float > 0:
        return rho_float, rho_exact, False
    if rho_float == 0:
        R = 1.0 if next_modulus is None else min(1.0, next_modulus / 2)
        return R, (Fraction(1) if R == 1.0 else None), True
    tight = rho_float * q ** TIGHT_OFFSET
    if next_modulus is None:
        return tight, None, True
    if policy == "tight" and tight < next_modulus:
        return tight, None, True
    return math.sqrt(rho_float * next_modulus), None, True


def expansion(rep: LinearRepresentation, product_length: int = DEFAULT_PRODUCT_LENGTH,
              policy: str = "geometric") -> AsymptoticExpansion:
    """Classify the asymptotic expansion of ``Sigma x(N)`` for ``N -> infinity``."""
    C = summation_matrices(rep).C
    spectrum = eigenstructure(C)
    jsr = joint_spectral_radius(rep.matrices, product_length)
    growth = simple_growth_check(rep.matrices)
    R, R_exact, eps = choose_R(jsr, growth, spectrum, rep.q, policy)
    terms = []
    kappa = 0
    kappa_empty = True
    omitted = True
    for entry in spectrum:
        ev = entry.eigenvalue
        cmp = _compare_modulus(ev, R_exact, R)
        if cmp > 0:
            symbolic, numeric = log_exponent(ev.value, rep.q)
            for k in reversed(range(entry.jordan_index)):
                terms.append(Term(ev, k, numeric, symbolic))
        else:
            omitted = False
            if cmp == 0:
                kappa_empty = False
                kappa = max(kappa, entry.jordan_index)
    rho_float = float(jsr.value) if jsr.exact else jsr.upper
    rho_exact = jsr.exact_value if jsr.exact else None
    base = math.log(rho_float, rep.q) if rho_float > 0 else -math.inf
    error = ErrorTerm(
        R=R, R_exact=R_exact, exponent=math.log(R, rep.q), log_power=kappa,
        epsilon_flag=eps, omitted=omitted, rho=rho_float, rho_exact=rho_exact,
        base_exponent=base, kappa_empty=kappa_empty, policy=policy,
    )
    return AsymptoticExpansion(rep.q, tuple(terms), error, spectrum, jsr, growth)


# -- smoothing ---------------------------------------------------------------

@dataclass(frozen=True)
class SmoothingResult:
    order: int
    spectral_radius_C: float
    scaled_radius: float  # q^(order-1) * r, the dominant eigenvalue modulus at that order
    jsr: float
    expansion: AsymptoticExpansion


def smoothing_analysis(rep: LinearRepresentation, max_order: int = 64,
                       product_length: int = DEFAULT_PRODUCT_LENGTH,
                       policy: str = "geometric") -> SmoothingResult:
    """Find the least ``k >= 1`` whose order-``(k-1)`` iterated rep expands well.

    ``k = 1`` means the expansion of ``rep`` itself already has main terms.
    """
    C = summation_matrices(rep).C
    if C.is_zero():
        raise TheoremHypothesisError("theorem hypothesis violated: C=0")
    spectrum = eigenstructure(C)
    r = max(e.eigenvalue.modulus for e in spectrum)
    if all(e.eigenvalue.exact and e.eigenvalue.value == 0 for e in spectrum):
        raise TheoremHypothesisError("nilpotent C: no finite order")
    for k in range(1, max_order + 1):
        target = rep if k == 1 else iterated_summatory_rep(rep, k - 1).rep
        exp = expansion(target, product_length, policy)
        if exp.terms:
            rho = float(exp.jsr.value) if exp.jsr.exact else exp.jsr.upper
            return SmoothingResult(k, r, rep.q ** (k - 1) * r, rho, exp)
    raise ArithmeticError(f"no good expansion up to order {max_order}")


def minimal_smoothing_order(rep: LinearRepresentation, **kwargs) -> int:
    return smoothing_analysis(rep, **kwargs).order


# -- empirical fluctuations --------------------------------------------------

@dataclass
class FluctuationEstimate:
    """Samples of one periodic fluctuation ``Phi_{lambda k}`` on a grid of ``u``.

    The sample at ``(u, m)`` uses ``N = round(q^(m+u))`` as its top scale.
    """

    eigenvalue: Eigenvalue
    log_power: int
    grid: tuple[float, ...]
    m_list: tuple[int, ...]
    samples: list[tuple[float, int, complex]]
    fourier: list[tuple[int, complex, float]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def row(self, m: int) -> list[complex]:
        return [value for u, mm, value in self.samples if mm == m]

    def value(self, u_index: int, m: int) -> complex:
        return self.row(m)[u_index]

    def convergence_gaps(self) -> list[float]:
        """Per grid point ``|estimate(m_max) - estimate(m_prev)|``."""
        if len(self.m_list) < 2:
            return [math.nan] * len(self.grid)
        top, prev = self.row(self.m_list[-1]), self.row(self.m_list[-2])
        return [abs(a - b) for a, b in zip(top, prev)]


def _scale_point(q: int, m: int, u: Fraction) -> int:
    with mpmath.workdps(40):
        return int(mpmath.nint(mpmath.power(q, m + mpmath.mpf(u.numerator) / u.denominator)))


def _term_factor(N: int, term: Term, q: int) -> mpmath.mpc:
    logN = mpmath.log(N)
    lam = term.eigenvalue.value
    lam = mpmath.mpf(lam.numerator) / lam.denominator if isinstance(lam, Fraction) else \
        mpmath.mpc(complex(lam))
    growth = mpmath.exp(logN * mpmath.log(lam) / mpmath.log(q))
    return growth * logN ** term.log_power / mpmath.factorial(term.log_power)


def sample_fluctuations(rep: LinearRepresentation, exp: AsymptoticExpansion,
                        grid_size: int = 64,
                        m_list: Sequence[int] = DEFAULT_M_LIST,
                        check_convergence: bool = True) -> dict[tuple, FluctuationEstimate]:
    """Estimate every ``Phi_{lambda k}`` of the expansion on a uniform grid.

    At each ``(u, m)`` all main terms are fitted jointly: with ``T`` terms the
    exact values ``Sigma x(N_j)`` at ``N_j = round(q^(m-j+u))``, ``0 <= j < T``,
    give a ``T x T`` linear system in the unknowns ``Phi_{lambda k}(u)``
    (periodicity makes them shared across scales).  This removes the slowly
    decaying ``1/log N`` contamination between terms of equal modulus and the
    cross-talk between terms of different modulus; what remains is the error
    term relative to each main term.  With a single term the fit reduces to
    ``Sigma x(N) N^{-log_q lambda}``.
    """
    if not exp.terms:
        raise ValueError("no terms to sample: the expansion is an error term only")
    q = rep.q
    terms = exp.terms
    T = len(terms)
    m_list = tuple(sorted(m_list))
    if m_list[0] - T + 1 < 0:
        raise ValueError(f"smallest scale must be at least {T - 1} for {T} terms")
    srep = summatory_rep(rep)
    cache: dict[int, Fraction] = {}

    def S(N: int) -> Fraction:
        if N not in cache:
            cache[N] = evaluate(srep, N)
        return cache[N]

    grid = [Fraction(i, grid_size) for i in range(grid_size)]
    results = {t.key: FluctuationEstimate(t.eigenvalue, t.log_power,
                                          tuple(float(u) for u in grid), m_list, [])
               for t in terms}
    with mpmath.workdps(50):
        for m in m_list:
            for u in grid:
                top = q ** (T - 1) * _scale_point(q, m - T + 1, u)
                Ns = [top // q ** j for j in range(T)]
                matrix = mpmath.matrix(T, T)
                rhs = mpmath.matrix(T, 1)
                for row, N in enumerate(Ns):
                    s = S(N)
                    rhs[row] = mpmath.mpf(s.numerator) / s.denominator
                    for col, term in enumerate(terms):
                        matrix[row, col] = _term_factor(N, term, q)
                solution = mpmath.lu_solve(matrix, rhs)
                for col, term in enumerate(terms):
                    results[term.key].samples.append((float(u), m, complex(solution[col])))
    for est in results.values():
        top = est.row(m_list[-1])
        if max(abs(v) for v in top) < 1e-9:
            est.warnings.append("fluctuation is numerically zero at the largest scale")
        if check_convergence:
            _check_convergence(est)
    return results


def _check_convergence(est: FluctuationEstimate) -> None:
    if len(est.m_list) < 3:
        return
    rows = [est.row(m) for m in est.m_list[-3:]]
    growing = 0
    for a, b, c in zip(*rows):
        gap_prev, gap_last = abs(b - a), abs(c - b)
        scale = max(1.0, abs(c))
        if gap_last > gap_prev + 1e-12 * scale and gap_last > 1e-9 * scale:
            growing += 1
    if growing > 0.2 * len(rows[0]):
        raise NonConvergentError(
            f"non-convergent: successive-scale gap grows at {growing} of {len(rows[0])} "
            f"grid points for lambda={est.eigenvalue.render()}, k={est.log_power}")


def sample_fluctuation(rep: LinearRepresentation, exp: AsymptoticExpansion, lam, k: int,
                       grid_size: int = 64, m_list: Sequence[int] = DEFAULT_M_LIST
                       ) -> FluctuationEstimate:
    """Empirical samples of the single fluctuation ``Phi_{lambda k}``."""
    estimates = sample_fluctuations(rep, exp, grid_size, m_list)
    for (value, power), est in estimates.items():
        if power != k:
            continue
        if isinstance(lam, Eigenvalue):
            lam = lam.value
        if isinstance(value, Fraction) and isinstance(lam, (int, Fraction)):
            if value == lam:
                return est
        elif abs(complex(value) - complex(lam)) <= 10 * CLUSTER_TOL * max(1.0, abs(complex(lam))):
            return est
    raise KeyError(f"no main term with lambda={lam}, k={k}")


def fourier_coefficients(estimate: FluctuationEstimate, M: int) -> list[tuple[int, complex, float]]:
    """Discrete Fourier coefficients ``-M..M`` of the largest-scale sample row.

    Index 0 is the mean.  Each entry is ``(index, coefficient, gap)`` where the
    gap compares with the same coefficient from the previous scale.
    """
    G = len(estimate.grid)
    if G < 4 * M + 4:
        raise ValueError(f"grid of size {G} too small for {M} Fourier coefficients")
    top = np.fft.fft(np.array(estimate.row(estimate.m_list[-1]), dtype=complex)) / G
    prev = None
    if len(estimate.m_list) > 1:
        prev = np.fft.fft(np.array(estimate.row(estimate.m_list[-2]), dtype=complex)) / G
    out = []
    for j in range(-M, M + 1):
        coefficient = complex(top[j % G])
        gap = abs(coefficient - complex(prev[j % G])) if prev is not None else math.nan
        out.append((j, coefficient, gap))
    estimate.fourier = out
    return out
