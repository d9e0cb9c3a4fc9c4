import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waitlaws.exactreal import (
    DyadicInterval,
    DyadicStream,
    ExplicitStream,
    PeriodicStream,
    PrecisionBudgetExceeded,
    StreamTerminated,
    cf_digits,
    convergents,
    digits_from_json,
    digits_to_json,
    digits_until_sum_exceeds,
    from_rational,
)


def gauss_digits_mp(x, k):
    """Oracle: iterate the Gauss map in 300-digit arithmetic."""
    out = []
    with mpmath.workdps(300):
        for _ in range(k):
            d = int(mpmath.floor(1 / x))
            out.append(d)
            x = 1 / x - d
    return out


def euclid_gauss(x: Fraction):
    """Oracle: Gauss map on exact rationals until 0."""
    out = []
    while x:
        d = math.floor(1 / x)
        out.append(d)
        x = 1 / x - d
    return out


def test_sqrt2_minus_1_digits_are_all_two():
    with mpmath.workdps(300):
        x = mpmath.sqrt(2) - 1
        assert abs(x - 1 / (2 + x)) < mpmath.mpf(10) ** -290
        oracle = gauss_digits_mp(x, 40)
    assert PeriodicStream([2]).take(40) == oracle == [2] * 40


def test_golden_mean_digits_are_all_one():
    with mpmath.workdps(300):
        x = (mpmath.sqrt(5) - 1) / 2
        assert abs(x - 1 / (1 + x)) < mpmath.mpf(10) ** -290
        oracle = gauss_digits_mp(x, 40)
    assert PeriodicStream([1]).take(40) == oracle == [1] * 40


def test_explicit_two_fifths_terminates():
    s = from_rational(Fraction(2, 5))
    assert [s.next_digit(), s.next_digit()] == euclid_gauss(Fraction(2, 5)) == [2, 2]
    with pytest.raises(StreamTerminated):
        s.next_digit()
    assert s.terminated
    with pytest.raises(StreamTerminated):
        s.next_digit()


def test_periodic_with_preperiod():
    assert PeriodicStream([1, 2], preperiod=[3]).take(6) == [3, 1, 2, 1, 2, 1]


@pytest.mark.parametrize("c", [1, 2, 3, 7])
def test_periodic_fixed_point_of_gauss_map(c):
    # x = 1/(c+x) solves x^2 + c x - 1 = 0; the Gauss map fixes it
    with mpmath.workdps(100):
        x = (-c + mpmath.sqrt(c * c + 4)) / 2
        assert abs(1 / x - mpmath.floor(1 / x) - x) < mpmath.mpf(10) ** -90
        assert gauss_digits_mp(x, 10) == PeriodicStream([c]).take(10)


def test_digits_until_sum_exceeds_examples():
    assert digits_until_sum_exceeds(PeriodicStream([2]), 4) == [2, 2, 2]
    assert digits_until_sum_exceeds(PeriodicStream([1]), 0) == [1]
    assert digits_until_sum_exceeds(ExplicitStream([5, 1]), 3) == [5]


def test_digits_until_sum_exceeds_rational_end():
    with pytest.raises(StreamTerminated):
        digits_until_sum_exceeds(ExplicitStream([2, 2]), 10)


@given(st.lists(st.integers(1, 30), min_size=1, max_size=40), st.integers(0, 200))
def test_digits_until_sum_exceeds_contract(digits, n):
    s = ExplicitStream(digits)
    if sum(digits) <= n:
        with pytest.raises(StreamTerminated):
            digits_until_sum_exceeds(s, n)
        return
    out = digits_until_sum_exceeds(s, n)
    assert out == digits[: len(out)]
    assert sum(out) > n >= sum(out[:-1])


def test_invalid_digits_rejected():
    with pytest.raises(ValueError):
        ExplicitStream([1, 0, 2])
    with pytest.raises(ValueError):
        PeriodicStream([])


@given(st.fractions(min_value=0, max_value=1))
def test_cf_digits_matches_gauss_iteration(x):
    assert cf_digits(x) == euclid_gauss(Fraction(x))


@given(st.lists(st.integers(1, 50), min_size=1, max_size=20))
def test_convergents_reconstruct_value(digits):
    if digits[-1] == 1 and len(digits) > 1:
        digits = digits[:-1] + [2]
    v = Fraction(0)
    for d in reversed(digits):
        v = 1 / (d + v)
    assert convergents(digits)[-1] == v
    assert cf_digits(v) == digits


def test_dyadic_interval_invariants():
    iv = DyadicInterval(5, 3)
    assert (iv.lower, iv.upper) == (Fraction(5, 8), Fraction(6, 8))
    lo, hi = iv.refine(0), iv.refine(1)
    assert lo.width == hi.width == iv.width / 2
    assert iv.lower <= lo.lower < lo.upper <= iv.upper
    assert iv.lower <= hi.lower < hi.upper <= iv.upper
    with pytest.raises(ValueError):
        DyadicInterval(8, 3)
    with pytest.raises(ValueError):
        DyadicInterval(0, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**64 - 1), st.sampled_from([1, 3, 7, 32, 64, 200]))
def test_dyadic_digits_independent_of_chunking(seed, chunk):
    ref = DyadicStream(seed, chunk_bits=32).take(25)
    assert DyadicStream(seed, chunk_bits=chunk).take(25) == ref


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 30))
def test_dyadic_interval_inside_digit_cylinder(seed, k):
    s = DyadicStream(seed)
    digits = s.take(k)
    lo, hi = s.cylinder()
    iv = s.interval
    assert lo <= iv.lower and iv.upper <= hi
    # the cylinder of the emitted prefix is spanned by the last two convergents
    conv = convergents(digits)
    prev = conv[-2] if len(conv) > 1 else Fraction(0, 1)  # p_0/q_0 = 0/1
    assert {lo, hi} == {conv[-1], Fraction(conv[-1].numerator + prev.numerator,
                                          conv[-1].denominator + prev.denominator)}


def test_dyadic_same_seed_same_digits():
    assert DyadicStream(123).take(50) == DyadicStream(123).take(50)
    assert DyadicStream(123).take(50) != DyadicStream(124).take(50)


def test_dyadic_precision_budget():
    s = DyadicStream(7, max_bits=16, chunk_bits=4)
    with pytest.raises(PrecisionBudgetExceeded):
        s.take(100)
    assert s.bits_used == 16


def test_dyadic_seed_range():
    with pytest.raises(ValueError):
        DyadicStream(-1)
    with pytest.raises(ValueError):
        DyadicStream(2**64)


def test_json_roundtrip():
    d = [1, 2, 300000000000000000000, 4]
    assert digits_from_json(digits_to_json(d)) == d
    with pytest.raises(ValueError):
        digits_from_json('{"a": 1}')
    with pytest.raises(ValueError):
        digits_from_json("[1, 0]")
