from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waitlaws import maps
from waitlaws.exactreal import convergents
from waitlaws.maps import FAREY, LASOTA_YORKE, THALER0
from waitlaws.processes import (
    HorizonTooShort,
    OrbitTerminated,
    PrecisionDegradation,
    VisitTimes,
    WaitingRecord,
    WaitingSample,
    cross_check,
    farey_engines_exhaustive,
    first_entry,
    first_return,
    visits_from_digits,
    visits_from_orbit,
    waiting_record,
    waiting_record_from_orbit,
)


def stepwise_visits(m, x, horizon):
    """Oracle: one map application per time step, no laminar jumps."""
    out = []
    for t in range(horizon + 1):
        if x == 0:
            break
        if m.in_reference(x):
            out.append(t)
        x = maps.apply(m, x)
    return tuple(out)


def test_visits_from_digits_examples():
    assert visits_from_digits([1] * 6).times == (0, 1, 2, 3, 4, 5)
    assert visits_from_digits([2] * 5).times == (1, 3, 5, 7, 9)
    assert visits_from_digits([5]).times == (4,)
    with pytest.raises(ValueError):
        visits_from_digits([])


def test_all_twos_visits_match_orbit_of_sqrt2_minus_1():
    # sqrt(2) - 1 in high precision, stepped through the Farey map
    with mpmath.workdps(200):
        x = mpmath.sqrt(2) - 1
        vis = []
        for t in range(10):
            if x > 0.5:
                vis.append(t)
                x = 1 / x - 1
            else:
                x = x / (1 - x)
    assert tuple(vis) == (1, 3, 5, 7, 9) == visits_from_digits([2] * 6).upto(9)


def test_orbit_examples():
    v = visits_from_orbit(FAREY, Fraction(2, 3), 4)
    assert v.times == (0, 2) and v.terminated
    assert v.times == stepwise_visits(FAREY, Fraction(2, 3), 4)
    # a long convergent of sqrt(2) - 1
    x = convergents([2] * 30)[-1]
    assert visits_from_orbit(FAREY, x, 9).upto(9) == (1, 3, 5, 7, 9)
    for x in (Fraction(3, 4), Fraction(1), Fraction(51, 100)):
        assert visits_from_orbit(FAREY, x, 0).times[0] == 0


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=500), st.integers(0, 60),
       st.sampled_from([FAREY, LASOTA_YORKE]))
def test_orbit_engine_matches_stepwise_iteration(x, h, m):
    x = Fraction(x)
    v = visits_from_orbit(m, x, h)
    assert v.upto(h) == stepwise_visits(m, x, h)


def test_waiting_record_examples():
    r = waiting_record(visits_from_digits([2] * 5), 4)
    assert (r.Z, r.Y, r.V, r.in_A_n) == (3, 5, 2, True)
    r = waiting_record(VisitTimes((4,), 4), 3)
    assert (r.Z, r.Y, r.V, r.in_A_n) == (0, 4, 4, False)
    r = waiting_record(visits_from_digits([1] * 20), 7)
    assert (r.Z, r.Y, r.V) == (7, 8, 1)


def test_waiting_record_errors():
    with pytest.raises(HorizonTooShort):
        waiting_record(visits_from_digits([2, 2]), 3)
    with pytest.raises(OrbitTerminated):
        waiting_record(visits_from_orbit(FAREY, Fraction(2, 3), 10), 5)
    with pytest.raises(ValueError):
        WaitingRecord(5, 3, 5, True)
    with pytest.raises(ValueError):
        WaitingRecord(5, 2, 7, False)


def test_waiting_record_from_orbit_extends_horizon():
    x = convergents([3, 1, 40, 2, 2, 2, 7])[-1]
    r = waiting_record_from_orbit(FAREY, x, 10)
    assert r == waiting_record(visits_from_digits([3, 1, 40, 2, 2, 2, 7]), 10)


def test_csv_row():
    r = WaitingRecord(4, 3, 5, True)
    assert WaitingRecord.CSV_HEADER == ("n", "Z", "Y", "V", "in_A_n")
    assert r.as_row() == (4, 3, 5, 2, 1)
    s = WaitingSample(4, [3, 0], [5, 6], [True, False])
    assert s.to_csv().splitlines() == ["n,Z,Y,V,in_A_n", "4,3,5,2,1", "4,0,6,6,0"]
    assert s.to_csv({"lambda": [0.5, 1.0]}).splitlines()[1] == "4,3,5,2,1,0.5"


def test_first_return_examples():
    assert first_return(FAREY, Fraction(2, 3)) == 2
    assert stepwise_visits(FAREY, Fraction(2, 3), 3)[:2] == (0, 2)
    assert first_return(FAREY, Fraction(3, 4)) == 3
    assert maps.apply(FAREY, Fraction(3, 4)) == Fraction(1, 3)
    # T(3/5) = 2/3 lies in K_1
    assert first_return(FAREY, Fraction(3, 5)) == 1
    assert first_return(LASOTA_YORKE, Fraction(7, 8)) == 1
    assert first_return(LASOTA_YORKE, Fraction(3, 4)) == 2
    with pytest.raises(ValueError):
        first_return(FAREY, Fraction(1, 3))
    with pytest.raises(OrbitTerminated):
        first_return(FAREY, 1)


def test_first_entry():
    assert first_entry(FAREY, Fraction(1, 5)) == 4
    assert first_entry(FAREY, Fraction(3, 4)) == 0
    assert first_entry(LASOTA_YORKE, Fraction(1, 5)) == 4


def test_cross_check_examples():
    assert cross_check(Fraction(355, 113) - 3, 50).match
    rep = cross_check(Fraction(2, 5), 3)
    assert rep.match and rep.digit_times == (1, 3)
    rep = cross_check(Fraction(1, 2), 1)
    assert rep.match and rep.digit_times == (1,)


def test_engines_agree_small_denominators():
    for q in range(1, 200):
        for p in range(1, q + 1):
            if np.gcd(p, q) == 1:
                assert cross_check(Fraction(p, q), 10**6).match


def test_engines_agree_exhaustive_kernel_small():
    checked, bad = farey_engines_exhaustive(300)
    assert bad == 0 and checked > 0


@given(st.lists(st.integers(1, 50), min_size=2, max_size=30), st.data())
def test_process_invariants(digits, data):
    vt = visits_from_digits(digits)
    last = vt.times[-1]
    prev = None
    for n in range(0, last):
        r = waiting_record(vt, n)
        assert r.Z <= n < r.Y and r.V >= 1
        if r.in_A_n:
            assert r.Z in vt.times
        if prev is not None:
            assert r.Y >= prev.Y
            if prev.in_A_n:
                assert r.Z >= prev.Z
        prev = r
    # {Z_n <= k} = {Y_k > n} for 1 <= k <= n
    if last < 2:
        return
    n = data.draw(st.integers(1, last - 1))
    k = data.draw(st.integers(1, n))
    assert (waiting_record(vt, n).Z <= k) == (waiting_record(vt, k).Y > n)


def test_thaler_certified_orbit_matches_float():
    a = maps.thaler_boundary()
    for x0 in (0.3, 0.55, 0.9, 0.123456):
        v = visits_from_orbit(THALER0, x0, 60)
        x, fv = x0, []
        for t in range(61):
            if x > a:
                fv.append(t)
                x = (x - a) / (1 - a)
            else:
                x = maps.thaler_f(x)
        assert v.times == tuple(fv)


def test_thaler_precision_degradation():
    lo, hi = maps.thaler_boundary_mp(128)
    with mpmath.workprec(300):
        mid = (lo + hi) / 2
    with pytest.raises(PrecisionDegradation):
        visits_from_orbit(THALER0, mid, 5)
    # at low precision the enclosure widens until it can no longer decide
    with pytest.raises(PrecisionDegradation):
        visits_from_orbit(maps.get_map("thaler0", precision=20), 0.3, 10**4)
