"""Visit times of the reference set and the waiting-time processes Z, Y, V.

Two independent engines produce visit times:

* the digit engine reads them off a continued-fraction expansion: for the
  Farey map and ``K_1 = (1/2, 1]`` the visits happen exactly at the times
  ``kappa_1 + ... + kappa_k - 1``;
* the orbit engine iterates the map itself, jumping through laminar
  phases in closed form.

For a point x and horizon n,

    Z_n = last visit <= n   (0 and ``in_A_n = False`` if there is none)
    Y_n = first visit > n
    V_n = Y_n - Z_n
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from numba import njit

from . import maps
from .exactreal import cf_digits
from .maps import MapDescriptor, MapKind

__all__ = [
    "HorizonTooShort",
    "OrbitTerminated",
    "PrecisionDegradation",
    "VisitTimes",
    "WaitingRecord",
    "WaitingSample",
    "visits_from_digits",
    "visits_from_orbit",
    "waiting_record",
    "waiting_record_from_orbit",
    "first_return",
    "first_entry",
    "CrossCheckReport",
    "cross_check",
    "farey_engines_exhaustive",
    "laminar_escape_exhaustive",
]


class HorizonTooShort(LookupError):
    """No visit beyond the requested time is known yet; extend the input."""


class OrbitTerminated(LookupError):
    """The orbit fell onto the fixed point 0 and never visits again."""


class PrecisionDegradation(ArithmeticError):
    """The certified enclosure of an orbit point straddles a set boundary."""


@dataclass(frozen=True)
class VisitTimes:
    """Visit times ``B_1 < B_2 < ...`` complete up to ``horizon``.

    ``terminated`` means no visit exists after the listed ones at all.
    """

    times: tuple
    horizon: int
    terminated: bool = False

    def __post_init__(self):
        t = tuple(int(v) for v in self.times)
        object.__setattr__(self, "times", t)
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("visit times must be strictly increasing")
        if t and t[0] < 0:
            raise ValueError("visit times must be non-negative")

    def upto(self, h: int) -> tuple:
        return tuple(t for t in self.times if t <= h)

    def __len__(self):
        return len(self.times)


@dataclass(frozen=True)
class WaitingRecord:
    n: int
    Z: int
    Y: int
    in_A_n: bool

    def __post_init__(self):
        if not (0 <= self.Z <= self.n < self.Y):
            raise ValueError(f"need Z <= n < Y, got Z={self.Z}, n={self.n}, Y={self.Y}")
        if not self.in_A_n and self.Z != 0:
            raise ValueError("Z must be 0 outside A_n")

    @property
    def V(self) -> int:
        return self.Y - self.Z

    CSV_HEADER = ("n", "Z", "Y", "V", "in_A_n")

    def as_row(self) -> tuple:
        return (self.n, self.Z, self.Y, self.V, int(self.in_A_n))


@dataclass
class WaitingSample:
    """Waiting records of many independent samples at one horizon."""

    n: int
    Z: np.ndarray
    Y: np.ndarray
    in_A_n: np.ndarray
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.Z = np.asarray(self.Z, dtype=np.int64)
        self.Y = np.asarray(self.Y, dtype=np.int64)
        self.in_A_n = np.asarray(self.in_A_n, dtype=bool)

    @property
    def V(self) -> np.ndarray:
        return self.Y - self.Z

    def __len__(self):
        return self.Z.size

    def record(self, i: int) -> WaitingRecord:
        return WaitingRecord(self.n, int(self.Z[i]), int(self.Y[i]), bool(self.in_A_n[i]))

    def to_csv(self, columns: dict | None = None) -> str:
        """CSV text with columns n,Z,Y,V,in_A_n plus any extra ``columns``."""
        columns = columns or {}
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(WaitingRecord.CSV_HEADER) + list(columns))
        V = self.V
        extra = [np.asarray(v) for v in columns.values()]
        for i in range(len(self)):
            row = [self.n, int(self.Z[i]), int(self.Y[i]), int(V[i]), int(self.in_A_n[i])]
            row += [repr(float(c[i])) for c in extra]
            w.writerow(row)
        return buf.getvalue()


# --- digit engine -----------------------------------------------------------

def visits_from_digits(digits: Sequence[int], terminated: bool = False) -> VisitTimes:
    """Farey visit times to ``K_1`` from continued-fraction digits.

    The k-th visit is at ``kappa_1 + ... + kappa_k - 1``; the list is
    complete up to the last of these.
    """
    if len(digits) == 0:
        raise ValueError("need at least one digit")
    s = np.cumsum(np.asarray(digits, dtype=object))
    times = tuple(int(v) - 1 for v in s)
    return VisitTimes(times, times[-1], terminated)


# --- orbit engine -----------------------------------------------------------

def _rational_orbit(m: MapDescriptor, x: Fraction, horizon: int) -> VisitTimes:
    half = Fraction(1, 2)
    t = 0
    visits = []
    while True:
        if x == 0:
            return VisitTimes(visits, max(horizon, t), terminated=True)
        if x <= half:
            k, x = maps.laminar_escape(x, m)
            t += k
        visits.append(t)
        if t >= horizon:
            return VisitTimes(visits, t)
        x = 1 / x - 1 if m.kind is MapKind.FAREY else 2 * x - 1
        t += 1


def _thaler_orbit(m: MapDescriptor, x, horizon: int) -> VisitTimes:
    """Certified thaler0 orbit in interval arithmetic at ``m.precision`` bits."""
    iv = mpmath.iv
    saved = iv.prec
    iv.prec = m.precision
    try:
        return _thaler_orbit_iv(iv, m, x, horizon)
    finally:
        iv.prec = saved


def _thaler_orbit_iv(iv, m, x, horizon):
    lo, hi = maps.thaler_boundary_mp(m.precision)
    a = iv.mpf([lo, hi])
    if isinstance(x, Fraction):
        y = iv.mpf(x.numerator) / x.denominator
    elif isinstance(x, mpmath.mpf):
        # outward rounding keeps inputs finer than the working precision enclosed
        y = iv.mpf(x)
    else:
        y = iv.mpf(mpmath.mpf(x))
    visits = []
    for t in range(horizon + 1):
        if y.a > a.b:
            visits.append(t)
            y = (y - a) / (1 - a)
        elif y.b <= a.a:
            if y.b <= 0:
                return VisitTimes(visits, horizon, terminated=True)
            y = y + y * y * iv.exp(-1 / y)
        else:
            raise PrecisionDegradation(
                f"orbit enclosure [{y.a}, {y.b}] straddles the boundary at time {t}"
            )
        y = iv.mpf([max(y.a, 0), min(y.b, 1)])
    return VisitTimes(visits, horizon)


def visits_from_orbit(m: MapDescriptor, x, horizon: int) -> VisitTimes:
    """Visit times of the reference set along the orbit of ``x``.

    farey / lasota-yorke: exact rational iteration (floats are converted
    exactly) with laminar jumps; the result may extend past ``horizon`` up
    to the first visit at or after it. thaler0: step-by-step interval
    arithmetic; raises :class:`PrecisionDegradation` once the enclosure
    can no longer decide membership.
    """
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    if m.kind in (MapKind.FAREY, MapKind.LASOTA_YORKE):
        return _rational_orbit(m, maps._exact(x), horizon)
    if m.kind is MapKind.THALER0:
        return _thaler_orbit(m, x, horizon)
    raise ValueError("the Gauss map has no reference set")


def waiting_record(visits: VisitTimes, n: int) -> WaitingRecord:
    """``(n, Z_n, Y_n, V_n, in_A_n)`` from visit times complete beyond ``n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    times = visits.times
    i = np.searchsorted(np.asarray(times, dtype=object), n, side="right") if times else 0
    i = int(i)
    if i >= len(times):
        if visits.terminated:
            raise OrbitTerminated(f"no visit after time {n}: orbit absorbed at 0")
        raise HorizonTooShort(
            f"visit times complete only up to {visits.horizon}; need a visit after {n}"
        )
    Y = times[i]
    if i > 0:
        return WaitingRecord(n, times[i - 1], Y, True)
    return WaitingRecord(n, 0, Y, False)


def waiting_record_from_orbit(m: MapDescriptor, x, n: int) -> WaitingRecord:
    """Waiting record by orbit iteration, doubling the horizon as needed."""
    h = max(n + 1, 1)
    while True:
        vt = visits_from_orbit(m, x, h)
        try:
            return waiting_record(vt, n)
        except HorizonTooShort:
            h *= 2


def first_entry(m: MapDescriptor, x) -> int:
    """``e(x) = min{k >= 0 : T^k x in A}``; for Farey this is ``kappa_1(x) - 1``."""
    if m.kind is MapKind.FAREY:
        x = maps._exact(x)
        if x == 0:
            raise OrbitTerminated("0 never enters K_1")
        return (x.denominator // x.numerator) - 1
    vt = visits_from_orbit(m, x, 0)
    if not vt.times:
        raise OrbitTerminated("orbit never enters the reference set")
    return vt.times[0]


def first_return(m: MapDescriptor, x) -> int:
    """``phi(x) = inf{n >= 1 : T^n x in A}`` for ``x`` in the reference set.

    For Farey this is ``kappa_1(T x)``.
    """
    if not m.in_reference(x):
        raise ValueError("first_return needs x in the reference set")
    if m.kind is MapKind.FAREY:
        y = maps.apply(m, x)
        if y == 0:
            raise OrbitTerminated("T(1) = 0: the orbit never returns")
        return y.denominator // y.numerator
    vt = visits_from_orbit(m, x, 1)
    if len(vt.times) < 2:
        raise OrbitTerminated("orbit absorbed before returning")
    return vt.times[1]


# --- two-engine comparison --------------------------------------------------

@dataclass(frozen=True)
class CrossCheckReport:
    x: Fraction
    horizon: int
    digit_times: tuple
    orbit_times: tuple

    @property
    def match(self) -> bool:
        return self.digit_times == self.orbit_times


def cross_check(x, n: int) -> CrossCheckReport:
    """Compare digit-engine and orbit-engine Farey visits of a rational up to ``n``.

    When the expansion of ``x`` ends before ``n`` the comparison runs up to
    its last visit.
    """
    x = maps._exact(x)
    digits = cf_digits(x)
    if not digits:
        raise ValueError("x = 0 has no visits")
    dv = visits_from_digits(digits, terminated=True)
    ov = visits_from_orbit(maps.FAREY, x, n)
    h = min(n, dv.horizon, ov.horizon)
    return CrossCheckReport(x, h, dv.upto(h), ov.upto(h))


# --- exhaustive small-denominator checks -------------------------------------

@njit(cache=True)
def _digit_visits(p, q, out):
    # Euclid: visits at partial sums of the digits minus one
    k = 0
    s = 0
    num, den = p, q
    while num > 0:
        d = den // num
        s += d
        out[k] = s - 1
        k += 1
        num, den = den - d * num, num
    return k


@njit(cache=True)
def _orbit_visits(p, q, out):
    # Farey iteration on a/b with laminar jumps; returns -1 on a bad jump
    k = 0
    t = 0
    a, b = p, q
    while a > 0:
        if 2 * a <= b:
            j = (b - 2 * a) // a + 1
            # defining property: T0^(j-1) x <= 1/2 < T0^j x
            if not (2 * a > b - j * a and (j == 1 or 2 * a <= b - (j - 1) * a)):
                return -1
            b = b - j * a
            t += j
        out[k] = t
        k += 1
        a, b = b - a, a
        t += 1
    return k


@njit(cache=True)
def _exhaustive(qmax):
    buf1 = np.empty(64, np.int64)
    buf2 = np.empty(64, np.int64)
    checked = 0
    bad = 0
    for q in range(1, qmax + 1):
        for p in range(1, q + 1):
            a, b = p, q
            while b:
                a, b = b, a % b
            if a != 1:
                continue
            checked += 1
            k1 = _digit_visits(p, q, buf1)
            k2 = _orbit_visits(p, q, buf2)
            if k1 != k2:
                bad += 1
                continue
            for i in range(k1):
                if buf1[i] != buf2[i]:
                    bad += 1
                    break
    return checked, bad


def farey_engines_exhaustive(max_denominator: int) -> tuple[int, int]:
    """Compare both engines on every rational ``p/q`` in (0, 1], ``q <= max_denominator``.

    Returns ``(number checked, number of mismatches)``. Visit sequences run
    to termination of the expansion.
    """
    checked, bad = _exhaustive(int(max_denominator))
    return int(checked), int(bad)


@njit(cache=True)
def _laminar_exhaustive(qmax):
    checked = 0
    bad = 0
    for q in range(2, qmax + 1):
        for p in range(1, q // 2 + 1):
            a, b = p, q
            while b:
                a, b = b, a % b
            if a != 1:
                continue
            checked += 1
            closed = (q - 2 * p) // p + 1
            # naive iteration of x -> x/(1-x) on p/q keeps the numerator p
            steps = 0
            den = q
            while True:
                den -= p
                steps += 1
                if 2 * p > den:
                    break
            if steps != closed or den != q - closed * p:
                bad += 1
    return checked, bad


def laminar_escape_exhaustive(max_denominator: int) -> tuple[int, int]:
    """Closed-form laminar escape versus naive iteration for all ``p/q <= 1/2``."""
    checked, bad = _laminar_exhaustive(int(max_denominator))
    return int(checked), int(bad)
