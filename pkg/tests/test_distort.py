import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from waitlaws.distort import critical_arrays, critical_statistics, distorted, distorted_arrays
from waitlaws.maps import FareyWandering, TabulatedWandering, WanderingTooShort
from waitlaws.processes import WaitingRecord, WaitingSample

W = FareyWandering()


def test_identity_when_V_equals_n():
    d = distorted(WaitingRecord(7, 1, 8, True), W)
    assert d.lam == 1.0


def test_farey_example():
    d = distorted(WaitingRecord(4, 3, 5, True), W)
    L6 = math.log(6)
    assert d.lam == pytest.approx(math.log(4) / L6, rel=1e-15)
    assert d.gamma == pytest.approx((math.log(4) / 2) * (4 / L6), rel=1e-15)
    assert d.delta == pytest.approx(math.log(3) / L6, rel=1e-15)
    assert d.theta == pytest.approx((math.log(7) / 5) * (4 / L6), rel=1e-15)


def test_constant_tail_is_linear():
    m = 0.3
    lin = TabulatedWandering([m] * 100)
    r = WaitingRecord(9, 4, 20, True)
    assert distorted(r, lin).lam == pytest.approx((r.V + 1) / (9 + 1), rel=1e-14)


def test_short_wandering_raises():
    with pytest.raises(WanderingTooShort):
        distorted(WaitingRecord(4, 3, 50, True), TabulatedWandering([1.0] * 10))
    with pytest.raises(ValueError):
        distorted(WaitingRecord(0, 0, 3, True), W)


records = st.tuples(st.integers(1, 10**6), st.integers(0, 10**6), st.integers(1, 10**6)).map(
    lambda t: WaitingRecord(t[0], min(t[1], t[0]), t[0] + t[2], True)
)


@given(records)
def test_algebraic_identities(r):
    d = distorted(r, W)
    assert d.gamma == pytest.approx(d.lam * r.n / r.V, rel=1e-12)
    # theta * Y / n = W_Y / W_n >= 1 since W is nondecreasing and Y > n
    assert d.theta * r.Y / r.n == pytest.approx(W(r.Y) / W(r.n), rel=1e-12)
    assert W(r.Y) / W(r.n) >= 1
    assert all(v > 0 and math.isfinite(v) for v in (d.lam, d.gamma, d.delta, d.theta))


@given(records, st.integers(1, 1000))
def test_lambda_monotone_in_V(r, extra):
    bigger = WaitingRecord(r.n, r.Z, r.Y + extra, True)
    assert distorted(bigger, W).lam >= distorted(r, W).lam


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(0)
    n = 1000
    Z = rng.integers(0, n + 1, 200)
    Y = n + 1 + rng.integers(0, 10**6, 200)
    s = WaitingSample(n, Z, Y, np.ones(200, bool))
    arr = distorted_arrays(s, W)
    for i in range(0, 200, 17):
        d = distorted(s.record(i), W).as_dict()
        for k, v in d.items():
            assert arr[k][i] == pytest.approx(v, rel=1e-14)


def test_critical_statistics_examples():
    assert critical_statistics(WaitingRecord(100, 90, 100 + 1, True))[2] == 0.0
    s = critical_statistics(WaitingRecord(100, 95, 105, True))
    assert s[0] == pytest.approx(0.5, abs=1e-15)
    assert s[1] == pytest.approx(2.0, abs=1e-15)
    s = critical_statistics(WaitingRecord(10**4, 10**4, 10**6 + 10**4, True))
    assert s[0] == pytest.approx(1.5, abs=1e-15)
    s = critical_statistics(WaitingRecord(100, 100, 101, True))
    assert s[0] == 0.0 and s[1] == math.inf
    with pytest.raises(ValueError):
        critical_statistics(WaitingRecord(1, 1, 2, True))


def test_critical_arrays_match_scalar():
    s = WaitingSample(100, [100, 50, 3], [101, 200, 5000], [True] * 3)
    arr = critical_arrays(s)
    for i in range(3):
        sc = critical_statistics(s.record(i))
        got = (arr["logV_logn"][i], arr["logn_logV"][i], arr["logYn_logn"][i], arr["logn_logY"][i])
        assert got == pytest.approx(sc, rel=1e-14)
