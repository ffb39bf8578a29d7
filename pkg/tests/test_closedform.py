"""Closed forms against the numeric oracle and their series anchors."""

from fractions import Fraction
from math import gcd

import pytest

from so3inv.closedform import (CnTable, lens_lambda_series, lens_zprime,
                               seifert_cn, seifert_lambda_series,
                               seifert_zprime)
from so3inv.cyclotomic import CycInt, eval_complex, sine_quotient
from so3inv.errors import (ChainDegenerate, H1DivisibleByK, NotCoprime,
                           NotRHS, PDivisibleByK)
from so3inv.nt import SeifertData
from so3inv.surgery import Lens, zprime_numeric

POINCARE = SeifertData([(2, 1), (3, 1), (5, -4)])
SEIFERT_SAMPLE = [
    POINCARE,
    SeifertData([(3, 1), (4, 1), (5, 1)]),
    SeifertData([(-2, 1), (3, 1), (5, 1)]),
    SeifertData([(2, 1), (3, -1), (7, 2)]),
    SeifertData([(3, 2), (4, 3), (5, 4)]),
]


# ---------------------------------------------------------------------------
# multiplicity tables


def test_cn_single_fiber_is_delta():
    assert seifert_cn([3]).entries == {3: 1}
    assert seifert_cn([1, 1]).entries == {1: 1}


def test_cn_three_fibers():
    assert seifert_cn([2, 1, 1]).entries == {2: 1}
    assert seifert_cn([2, 3, 5]).entries == {8: 1, 6: 2, 4: 2, 2: 1}


def test_cn_support_is_positive_and_bounded():
    t = seifert_cn([4, 5, 7])
    assert all(1 <= n <= 4 + 5 + 7 - 2 for n in t.support)
    assert isinstance(t, CnTable) and t.exponents == (4, 5, 7)


def test_cn_rejects_bad_exponents():
    with pytest.raises(Exception):
        seifert_cn([0, 2])


# ---------------------------------------------------------------------------
# lens closed form


def test_lens_s3_is_one():
    assert lens_zprime(1, 0, 7) == CycInt.one(7)
    assert lens_zprime(1, 1, 11) == CycInt.one(11)
    assert lens_zprime(-1, 1, 5) == CycInt.one(5)


def test_lens_regression_coefficients():
    assert lens_zprime(2, 1, 5).coeffs == (0, 0, 1, 1)
    assert lens_zprime(3, 1, 7).coeffs == (0, 0, 1, 1, 0, 0)
    # the mirror conjugates the exponents
    assert lens_zprime(-3, 1, 7).coeffs == (0, 0, 0, 0, 1, 1)


def test_lens_matches_oracle_small_grid():
    checked = 0
    for K in (5, 7):
        for p in range(-7, 8):
            if p == 0 or p % K == 0:
                continue
            for q in range(1, max(abs(p), 2)):
                if gcd(p, q) != 1:
                    continue
                try:
                    oracle = zprime_numeric(Lens(p, q), K)
                except ChainDegenerate:
                    continue  # the presentation, not the manifold, is bad
                got = eval_complex(lens_zprime(p, q, K))
                assert abs(got - oracle) < 1e-9
                checked += 1
    assert checked > 40


def test_lens_preconditions():
    with pytest.raises(NotRHS):
        lens_zprime(0, 1, 5)
    with pytest.raises(NotCoprime):
        lens_zprime(4, 2, 5)
    with pytest.raises(PDivisibleByK):
        lens_zprime(10, 3, 5)


def test_sine_quotient_representative_independence():
    for K in (5, 11):
        for c in range(1, K):
            assert sine_quotient(c + K, K) == sine_quotient(c, K)


# ---------------------------------------------------------------------------
# star-shaped closed form


def test_seifert_regression_coefficients():
    assert seifert_zprime(POINCARE, 7).coeffs == (-1, -1, 1, 1, 1, 0)
    assert seifert_zprime(SEIFERT_SAMPLE[1], 7).coeffs == (1, 1, 1, 0, 0, 1)


def test_seifert_matches_oracle():
    for s in SEIFERT_SAMPLE:
        for K in (7, 11, 13):
            try:
                got = eval_complex(seifert_zprime(s, K))
            except (PDivisibleByK, H1DivisibleByK):
                continue
            assert abs(got - zprime_numeric(s, K)) < 1e-9


def test_seifert_preconditions():
    with pytest.raises(PDivisibleByK):
        seifert_zprime(SeifertData([(3, 1), (4, 1), (5, 1)]), 5)
    with pytest.raises(H1DivisibleByK):
        seifert_zprime(SeifertData([(2, 1), (3, 1)]), 5)  # |H1| = 5


def test_single_fiber_degenerates_to_lens():
    for (p, q), K in [((5, 2), 7), ((7, 3), 11), ((5, -4), 7)]:
        star = seifert_zprime(SeifertData([(p, q)]), K)
        assert star == lens_zprime(q, p, K)


# ---------------------------------------------------------------------------
# series


def test_lens_series_anchor():
    lam = lens_lambda_series(2, 1, 4)
    assert [lam[n] for n in range(4)] == [
        Fraction(1), Fraction(0), Fraction(-1, 32), Fraction(1, 32)]
    assert lam.provenance == "closed-form"


def test_s3_series_is_trivial():
    lam = lens_lambda_series(1, 0, 6)
    assert lam[0] == 1
    assert all(lam[n] == 0 for n in range(1, 7))


def test_poincare_series_is_integral():
    lam = seifert_lambda_series(POINCARE, 4)
    assert [lam[n] for n in range(5)] == [1, -6, 45, -464, 6224]


def test_single_fiber_series_degenerates_to_lens():
    for (p, q) in [(3, 1), (5, 2), (5, -4)]:
        a = seifert_lambda_series(SeifertData([(p, q)]), 6)
        b = lens_lambda_series(q, p, 6)
        assert all(a[n] == b[n] for n in range(7))


def test_series_leading_term_always_one():
    for (p, q) in [(2, 1), (-3, 1), (5, 2), (12, 7), (-9, 4)]:
        assert lens_lambda_series(p, q, 2)[0] == 1
    for s in SEIFERT_SAMPLE:
        assert seifert_lambda_series(s, 2)[0] == 1
