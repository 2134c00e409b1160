from fractions import Fraction

import pytest

from qregular.core import evaluate, evaluate_prefix
from qregular.dandc import (
    DandCProblem,
    build_h_rep,
    classify,
    cross_check,
    cross_check_many,
    d_values,
    dandc_oracle,
    minmax_oracle,
    reference_grid,
)
from qregular.rational import RationalMatrix
from qregular.spectral import jordan_index, joint_spectral_radius
from qregular.summation import summation_matrices, summatory_rep

MERGE_SORT = DandCProblem(1, 1, (-1, 1), 0)


def P(alpha, beta, toll, x1=0, **kw):
    return DandCProblem(Fraction(alpha), Fraction(beta), tuple(Fraction(c) for c in toll),
                        Fraction(x1), **kw)


def test_problem_validation():
    with pytest.raises(ValueError):
        P(0, 1, (1,))
    with pytest.raises(ValueError):
        P(1, -1, (1,))
    with pytest.raises(ValueError):
        P(1, 1, ())
    with pytest.raises(ValueError):
        P(1, 1, (1, 0))


def test_d_values_examples():
    d = d_values(P(1, 1, (2,), 0))
    assert (d.d0, d.d1) == (0, 2)
    d = d_values(P(1, 1, (0,), 1))
    assert (d.d0, d.d1) == (0, 0)


def test_d_values_overrides():
    p = P(1, 1, (-1, 1), 0, g0=Fraction(5), g1=Fraction(2))
    d = d_values(p)
    assert (d.d0, d.d1) == (3, 2)
    assert d.d0 + d.d1 == p.g_extended(0)


def test_d_sum_is_g0_on_grid():
    for p in reference_grid():
        d = d_values(p)
        assert d.d0 + d.d1 == p.g(0)


def test_oracle_examples():
    assert dandc_oracle(MERGE_SORT, 9) == [0, 0, 1, 3, 5, 8, 11, 14, 17]
    assert dandc_oracle(P(1, 1, (0,), 1), 5) == [0, 1, 2, 3, 4]
    assert dandc_oracle(P(3, 1, (2, 1), 7), 2) == [0, 7]


def test_h_rep_merge_sort():
    x = dandc_oracle(MERGE_SORT, 4097)
    h = evaluate_prefix(build_h_rep(MERGE_SORT), 4096)
    assert h == [b - a for a, b in zip(x, x[1:])]


def test_h_rep_k1_generic_shape():
    alpha, beta, c0, c1, x1 = Fraction(3), Fraction(2, 3), Fraction(5), Fraction(7), Fraction(1, 2)
    p = P(alpha, beta, (c0, c1), x1)
    d = d_values(p)
    rep = build_h_rep(p)
    assert rep.matrices[0] == RationalMatrix([[beta, c1, d.d0], [0, 1, 0], [0, 0, 1]])
    assert rep.matrices[1] == RationalMatrix([[alpha, c1, d.d1], [0, 1, 0], [0, 0, 0]])
    assert rep.w == RationalMatrix.column([x1, 1, 1])


def test_h_rep_reduced_identity():
    rep = build_h_rep(P(1, 1, (0,), 1))
    assert rep.dim == 1
    assert evaluate_prefix(rep, 20) == [1] * 20


def test_h_rep_dimensions():
    assert build_h_rep(P(1, 1, (1,), 1)).dim == 2
    assert build_h_rep(P(1, 1, (0, 0, 1), 0)).dim == 4
    # k = 1: d0 = d1 = 0 needs c0 = 0 and c1 = (1 - beta) x1
    p = P(1, Fraction(1, 2), (0, 1), 2)
    assert (d_values(p).d0, d_values(p).d1) == (0, 0)
    assert build_h_rep(p).dim == 2
    x = dandc_oracle(p, 200)
    assert evaluate_prefix(summatory_rep(build_h_rep(p)), 200) == x


def test_h_rep_on_grid():
    for p in reference_grid():
        x = dandc_oracle(p, 513)
        assert evaluate_prefix(build_h_rep(p), 512) == [b - a for a, b in zip(x, x[1:])]
        assert evaluate_prefix(summatory_rep(build_h_rep(p)), 512) == x[:512]


@pytest.mark.parametrize("p, tag, terms, error", [
    (MERGE_SORT, "2", [(2, 1), (2, 0)], (1, 0, True)),
    (P(1, 2, (0, 1), 1), "1b", [(3, 0)], (2, 1, False)),
    (P(1, 1, (0, 0, 1), 0), "4", [(4, 0)], (2, 1, False)),
    (P(1, 1, (0,), 1), "const-1", [(2, 0)], None),
    (P(Fraction(3, 2), Fraction(3, 2), (0, 1), 0), "1a", [(3, 0), (2, 0)], (Fraction(3, 2), 0, False)),
    (P(3, 3, (0, 1), 0), "1b", [(6, 0)], (3, 0, False)),
    (P(Fraction(1, 2), 1, (0, 1), 0), "3", [(2, 0), (Fraction(3, 2), 0)], (1, 0, True)),
    (P(Fraction(1, 2), Fraction(1, 2), (1,), 1), "const-2b", [], (1, 1, False)),
    (P(Fraction(1, 2), Fraction(3, 4), (1,), 1), "const-2a", [(Fraction(5, 4), 0)], (1, 1, False)),
])
def test_classify_examples(p, tag, terms, error):
    c = classify(p)
    assert c.case_tag == tag
    assert [(t.base, t.log_power) for t in c.main_terms] == terms
    if error is None:
        assert c.error.omitted
    else:
        assert (c.error.base, c.error.log_power, c.error.epsilon) == error


def test_case4_exponent_E():
    assert classify(P(1, 1, (0, 0, 1))).E == 1
    assert classify(P(1, 1, (0, 1, 1))).E == 2
    assert classify(P(Fraction(1, 2), Fraction(1, 2), (1, 1))).E == 2
    assert classify(P(Fraction(1, 2), Fraction(1, 2), (0, 1))).E == 1


def test_classification_scaling_invariance():
    for p in reference_grid():
        for factor in (Fraction(3), Fraction(2, 7)):
            scaled = DandCProblem(p.alpha, p.beta, tuple(c * factor for c in p.toll), p.x1 * factor)
            assert classify(scaled).case_tag == classify(p).case_tag


def test_cross_check_examples():
    for p in (MERGE_SORT, P(1, 2, (0, 1), 1), P(1, 1, (0,), 1)):
        report = cross_check(p, 1024)
        assert report.agree, report.summary()
    report = cross_check(MERGE_SORT, 64)
    assert report.engine.main_terms[0].base == 2
    assert "agree" in report.summary()


def test_cross_check_const_2b_note():
    report = cross_check(P(Fraction(1, 2), Fraction(1, 2), (1,), 1), 256)
    assert report.agree
    assert report.notes


def test_cross_check_reports_mismatch(monkeypatch):
    import qregular.dandc as dandc

    real = dandc.classify

    def wrong(p):
        c = real(p)
        return dandc.DandCClassification("2", c.main_terms[:1], c.error, c.E, c.d)

    monkeypatch.setattr(dandc, "classify", wrong)
    report = dandc.cross_check(MERGE_SORT, 16)
    assert not report.agree
    assert "main terms" in report.diffs[0]


def test_cross_check_many_sequential_and_parallel():
    problems = reference_grid()[:4]
    sequential = cross_check_many(problems, 128)
    parallel = cross_check_many(problems, 128, workers=2)
    assert [r.agree for r in sequential] == [r.agree for r in parallel] == [True] * 4


def test_radius_and_diagonal_facts_on_grid():
    for p in reference_grid():
        if p.k < 1:
            continue
        rep = build_h_rep(p)
        jsr = joint_spectral_radius(rep.matrices)
        assert jsr.exact and jsr.value == max(p.alpha, p.beta, Fraction(2) ** (p.k - 1))
        C = summation_matrices(rep).C
        expected = [p.alpha + p.beta] + [Fraction(2) ** i for i in range(p.k, 0, -1)]
        if rep.dim == p.k + 2:
            expected.append(Fraction(1))
        assert C.is_upper_triangular()
        assert sorted(C.diagonal()) == sorted(expected)


def test_jordan_facts_on_grid():
    for p in reference_grid():
        k = p.k
        if k < 1:
            continue
        C = summation_matrices(build_h_rep(p)).C
        s = p.alpha + p.beta
        if s == 2 ** k:
            assert jordan_index(C, 2 ** k) == 2
        if s == Fraction(2) ** (k - 1):
            d = d_values(p)
            bump = (p.toll[k - 1] != 0) if k >= 2 else (d.d0 + d.d1 != 0)
            assert jordan_index(C, Fraction(2) ** (k - 1)) == 1 + int(bump)


def test_minmax_fixture(minmax):
    rep, x = minmax
    h = evaluate_prefix(rep, 10 ** 4)
    assert h == [b - a for a, b in zip(x, x[1:])]
    assert evaluate(rep, 3) == 1
    for m in range(1, 21):
        assert minmax_oracle(2 ** m + 1)[2 ** m] == 3 * 2 ** (m - 1) - 2
