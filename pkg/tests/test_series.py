from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from so3inv.errors import (
    BadNormalization,
    DenominatorDivisibleByK,
    FactorialNotInvertible,
    InsufficientTerms,
    MixedModulus,
    NonUnitDivisor,
    NonzeroConstantInExp,
)
from so3inv.series import (
    DEFAULT_CAP,
    RatSeries,
    TruncPoly,
    LambdaSeries,
    S_from_lambda,
    binom_vee,
    gauss_moment_diamond,
    half_log_t,
    lambda_from_S,
    log1p,
    log_vee,
    q_power,
    s_div,
    s_exp,
    s_log,
    sinh_ratio,
    vee,
    x_over_log_pow,
)


def test_default_cap():
    assert RatSeries([1]).cap == DEFAULT_CAP
    assert len(RatSeries([1]).coeffs) == DEFAULT_CAP + 1


def test_min_cap_mixing():
    a = RatSeries([1, 1], cap=10)
    b = RatSeries([1, 2, 3], cap=4)
    assert (a + b).cap == 4
    assert (a * b).cap == 4


def test_mul_and_pow():
    x = RatSeries.x(6)
    s = (1 + x) ** 3
    assert [int(c) for c in s.coeffs[:4]] == [1, 3, 3, 1]
    assert s.coeffs[4] == 0


def test_s_div_inverts():
    s = RatSeries([1, 5, -2, Fraction(1, 3)], cap=8)
    q = s_div(RatSeries.const(1, 8), s)
    assert s * q == RatSeries.const(1, 8)


def test_s_div_nonunit():
    with pytest.raises(NonUnitDivisor):
        s_div(RatSeries.const(1, 4), RatSeries.x(4))


def test_s_exp_log_roundtrip():
    a = RatSeries([0, 1, Fraction(-1, 2), Fraction(2, 7)], cap=9)
    assert s_log(s_exp(a)) == a


def test_s_exp_requires_zero_constant():
    with pytest.raises(NonzeroConstantInExp):
        s_exp(RatSeries.const(1, 4))


def test_compose_requires_zero_constant():
    with pytest.raises(NonzeroConstantInExp):
        RatSeries.x(4).compose(RatSeries.const(1, 4))


def test_log1p_and_q_power():
    assert log1p(5).coeffs[:4] == (
        Fraction(0), Fraction(1), Fraction(-1, 2), Fraction(1, 3))
    half = q_power(Fraction(1, 2), 8)
    assert half * half == 1 + RatSeries.x(8)
    assert q_power(3, 8) == (1 + RatSeries.x(8)) ** 3
    # exponent addition
    a, b = Fraction(2, 3), Fraction(-1, 4)
    assert q_power(a, 8) * q_power(b, 8) == q_power(a + b, 8)


def test_exp_of_log_is_q_power():
    assert s_exp(log1p(10)) == 1 + RatSeries.x(10)


def test_sinh_ratio_edges():
    assert sinh_ratio(1, 8) == RatSeries.const(1, 8)
    assert sinh_ratio(0, 8) == RatSeries.zero(8)
    for a in (2, 3, Fraction(1, 2), Fraction(-2, 5)):
        assert sinh_ratio(a, 8).coeffs[0] == Fraction(a)


def test_sinh_ratio_integer_is_chebyshev_like():
    # sinh(3T)/sinh(T) = 4cosh^2(T) - 1 = 2cosh(2T) + 1, and
    # cosh(2T) = (q + 1/q)/2 with q = 1+x.
    q = 1 + RatSeries.x(10)
    expect = q + s_div(RatSeries.const(1, 10), q) + 1
    assert sinh_ratio(3, 10) == expect


def test_half_lens_ratio_regression():
    # 2*sinh(T/2)/sinh(T) = sech(T/2): leading lambda values 1, 0, -1/32, 1/32
    s = sinh_ratio(Fraction(1, 2), 6) * 2
    assert s.coeffs[0] == 1
    assert s.coeffs[1] == 0
    assert s.coeffs[2] == Fraction(-1, 32)
    assert s.coeffs[3] == Fraction(1, 32)


def test_truncpoly_basics():
    p = TruncPoly([1, 2, 3], 5)
    assert p.coeffs == (1, 2, 3)
    q = TruncPoly([4, 4], 5)
    assert (p + q).coeffs == (0, 1, 3)
    assert (p * q).coeffs == (4, 2, 0)  # degree cut at (K-1)/2 = 2
    with pytest.raises(MixedModulus):
        p + TruncPoly([1], 7)


def test_vee_log_example():
    assert log_vee(5) == TruncPoly([0, 1, 2], 5)


def test_vee_denominator_failure_names_degree():
    s = RatSeries([1, Fraction(1, 5), 0], cap=4)
    with pytest.raises(DenominatorDivisibleByK) as ei:
        vee(s, 5)
    assert "x^1" in str(ei.value)


def test_vee_insufficient_cap():
    with pytest.raises(InsufficientTerms):
        vee(RatSeries([1], cap=2), 11)


def test_binom_vee_examples():
    assert binom_vee(2, 5)(3).value == 3
    for m in (1, 2, 3, 4):
        assert binom_vee(m, 7)(m - 1).value == 0
        assert binom_vee(m, 7)(m).value == 1
    with pytest.raises(FactorialNotInvertible):
        binom_vee(5, 5)


def test_x_over_log_pow():
    assert x_over_log_pow(1, 5) == TruncPoly([1, 3, 2], 5)
    assert x_over_log_pow(0, 5) == TruncPoly([1], 5)
    assert x_over_log_pow(2, 5) == x_over_log_pow(1, 5) * x_over_log_pow(1, 5)


def test_gauss_moment_diamond_anchor():
    assert gauss_moment_diamond(2, 1, 1, 5) == TruncPoly([4, 2, 3], 5)
    with pytest.raises(FactorialNotInvertible):
        gauss_moment_diamond(1, 1, 7, 7)


def test_lambda_from_S_trivial():
    lam = lambda_from_S([], cap=8)
    assert lam.coeffs[0] == 1
    # T/sinh(T) = 1 - T^2/6 + ... at T = (1/2)log(1+x) = x/2 - x^2/4 + ...
    assert lam.coeffs[1] == 0
    assert lam.coeffs[2] == Fraction(-1, 24)
    back = S_from_lambda(lam, cap=8)
    assert all(c == 0 for c in back.coeffs)


def test_S_from_lambda_requires_unit_constant():
    with pytest.raises(BadNormalization):
        S_from_lambda(RatSeries([2, 1], cap=4))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.fractions(min_value=-2, max_value=2,
                             max_denominator=6), min_size=0, max_size=4))
def test_lambda_S_roundtrip(svals):
    cap = 7
    lam = lambda_from_S(svals, cap=cap)
    s = S_from_lambda(lam, cap=cap)
    for n, v in enumerate(svals, start=1):
        assert s.coeffs[n] == v


def test_lambda_series_container():
    ls = LambdaSeries("lens(2,1)", 3,
                      (Fraction(1), Fraction(0), Fraction(-1, 32),
                       Fraction(1, 32)), "closed-form")
    assert ls[2] == Fraction(-1, 32)
    with pytest.raises(InsufficientTerms):
        LambdaSeries("x", 2, (Fraction(1),), "closed-form")
