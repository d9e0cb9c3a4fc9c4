"""Interval maps with an indifferent fixed point at 0, and their wandering rates.

Shipped maps (selected by name):

``"farey"``          T(x) = x/(1-x) on [0, 1/2],  1/x - 1 on (1/2, 1]
``"lasota-yorke"``   T(x) = x/(1-x) on [0, 1/2],  2x - 1  on (1/2, 1]
``"thaler0"``        T(x) = x + x^2 exp(-1/x) on [0, a],  (x-a)/(1-a) on (a, 1],
                     where f(a) = 1
``"gauss"``          G(x) = 1/x - floor(1/x),  G(0) = 0

The rational maps work in exact :class:`fractions.Fraction` arithmetic
whenever they are handed a rational (floats are converted exactly). The
``thaler0`` map involves ``exp(-1/x)`` and is evaluated with mpmath at a
configurable binary precision (128 bits by default).

The reference set is the right-branch domain ``(boundary, 1]`` for all
maps except Gauss, which has none.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import optimize

__all__ = [
    "MapKind",
    "MapDescriptor",
    "FAREY",
    "LASOTA_YORKE",
    "THALER0",
    "GAUSS",
    "get_map",
    "apply",
    "u0",
    "u1",
    "u0_pow",
    "laminar_escape",
    "thaler_f",
    "thaler_boundary",
    "thaler_boundary_mp",
    "farey_wandering",
    "farey_tail",
    "WanderingSequence",
    "FareyWandering",
    "TabulatedWandering",
    "WanderingTooShort",
]

DEFAULT_THALER_PRECISION = 128


class MapKind(str, Enum):
    FAREY = "farey"
    LASOTA_YORKE = "lasota-yorke"
    THALER0 = "thaler0"
    GAUSS = "gauss"


def thaler_f(x):
    """Left branch ``x + x^2 exp(-1/x)`` of the thaler0 map (float)."""
    if x <= 0:
        return 0.0
    return x + x * x * math.exp(-1.0 / x)


@lru_cache(maxsize=None)
def thaler_boundary() -> float:
    """The root ``a`` of ``x + x^2 exp(-1/x) = 1`` in (0, 1), by bisection."""
    return optimize.bisect(lambda x: thaler_f(x) - 1.0, 0.5, 1.0, xtol=1e-17, rtol=1e-15,
                           maxiter=200)


@lru_cache(maxsize=None)
def thaler_boundary_mp(prec: int = DEFAULT_THALER_PRECISION) -> tuple:
    """Bracket ``(lo, hi)`` of mpf values around ``a`` at ``prec`` bits.

    Plain bisection carried out with 20 guard bits; the bracket is a few
    ulps wide at the requested precision and is not rounded afterwards.
    """
    with mpmath.workprec(prec + 20):
        lo, hi = mpmath.mpf("0.5"), mpmath.mpf(1)
        for _ in range(prec + 10):
            mid = (lo + hi) / 2
            if mid + mid * mid * mpmath.exp(-1 / mid) < 1:
                lo = mid
            else:
                hi = mid
    return lo, hi


@dataclass(frozen=True)
class MapDescriptor:
    kind: MapKind
    precision: int = DEFAULT_THALER_PRECISION

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def boundary(self):
        """Branch boundary: 1/2 exactly, or the float root ``a`` for thaler0."""
        if self.kind is MapKind.THALER0:
            return thaler_boundary()
        if self.kind is MapKind.GAUSS:
            raise ValueError("the Gauss map has countably many branches")
        return Fraction(1, 2)

    @property
    def has_reference_set(self) -> bool:
        return self.kind is not MapKind.GAUSS

    def in_reference(self, x) -> bool:
        """Membership in the reference set ``(boundary, 1]``."""
        if not self.has_reference_set:
            raise ValueError("the Gauss map has no reference set")
        if self.kind is MapKind.THALER0:
            lo, hi = thaler_boundary_mp(self.precision)
            with mpmath.workprec(self.precision + 64):
                if isinstance(x, Fraction):
                    x = mpmath.mpf(x.numerator) / x.denominator
                else:
                    x = mpmath.mpf(x)
            if lo < x <= hi:
                raise ValueError("x is within rounding of the boundary a")
            return x > hi
        return x > self.boundary


FAREY = MapDescriptor(MapKind.FAREY)
LASOTA_YORKE = MapDescriptor(MapKind.LASOTA_YORKE)
THALER0 = MapDescriptor(MapKind.THALER0)
GAUSS = MapDescriptor(MapKind.GAUSS)

_BY_NAME = {m.name: m for m in (FAREY, LASOTA_YORKE, THALER0, GAUSS)}


def get_map(name: str, precision: int = DEFAULT_THALER_PRECISION) -> MapDescriptor:
    try:
        kind = MapKind(name)
    except ValueError:
        raise ValueError(f"unknown map {name!r}; choose from {sorted(_BY_NAME)}") from None
    if kind is MapKind.THALER0 and precision != DEFAULT_THALER_PRECISION:
        return MapDescriptor(kind, precision)
    return _BY_NAME[name]


def _exact(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise TypeError(f"cannot treat {type(x).__name__} as an exact rational")


def _check_domain(x):
    if not 0 <= x <= 1:
        raise ValueError(f"x = {x} is outside [0, 1]")


def apply(m: MapDescriptor, x):
    """Image of ``x`` under the map.

    Rationals (and floats, which are converted exactly) give exact
    :class:`Fraction` results for the farey, lasota-yorke and gauss maps.
    thaler0 returns an mpf rounded to ``m.precision`` bits.
    """
    _check_domain(x)
    if m.kind is MapKind.THALER0:
        with mpmath.workprec(m.precision):
            if isinstance(x, Fraction):
                y = mpmath.mpf(x.numerator) / x.denominator
            else:
                y = mpmath.mpf(x)
            lo, _ = thaler_boundary_mp(m.precision)
            if y <= lo:
                return y + y * y * mpmath.exp(-1 / y) if y > 0 else mpmath.mpf(0)
            return (y - lo) / (1 - lo)
    x = _exact(x)
    if m.kind is MapKind.GAUSS:
        if x == 0:
            return Fraction(0)
        inv = 1 / x
        return inv - math.floor(inv)
    if x <= Fraction(1, 2):
        return x / (1 - x)
    if m.kind is MapKind.FAREY:
        return 1 / x - 1
    return 2 * x - 1


def u0(x):
    """Inverse of the left Farey branch, ``x / (1 + x)``."""
    return x / (1 + x)


def u1(x):
    """Inverse of the right Farey branch, ``1 / (1 + x)``."""
    return 1 / (1 + x)


def u0_pow(x, n: int):
    """``n``-fold inverse left branch in closed form, ``x / (1 + n x)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(x, (int, float)) and not isinstance(x, bool) and float(x).is_integer():
        x = Fraction(x)
    return x / (1 + n * x)


def laminar_escape(x, m: MapDescriptor = FAREY):
    """Jump through the laminar phase near the fixed point 0.

    For ``0 < x <= 1/2`` returns ``(k, T^k x)`` with ``k`` the least
    ``k >= 1`` such that ``T_0^k(x) = x / (1 - k x) > 1/2``. Only the
    farey and lasota-yorke maps share this left branch.
    """
    if m.kind not in (MapKind.FAREY, MapKind.LASOTA_YORKE):
        raise ValueError("laminar_escape needs the x/(1-x) left branch")
    if x == 0:
        raise ValueError("x = 0 is the indifferent fixed point and never escapes")
    if not 0 < x <= 0.5:
        raise ValueError("laminar_escape needs 0 < x <= 1/2")
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        k = (q - 2 * p) // p + 1
        return k, Fraction(p, q - k * p)
    x = float(x)
    k = math.floor((1.0 - 2.0 * x) / x) + 1
    # float rounding can misplace k by one near the cut points
    while k > 1 and x / (1.0 - (k - 1) * x) > 0.5:
        k -= 1
    while x / (1.0 - k * x) <= 0.5:
        k += 1
    return k, min(x / (1.0 - k * x), 1.0)


# --- wandering rates -------------------------------------------------------

class WanderingTooShort(IndexError):
    """A wandering sequence was evaluated past its tabulated length."""


def farey_wandering(n):
    """``W_n(K_1) = log(n + 2)`` for the Farey map and ``K_1 = (1/2, 1]``."""
    n = np.asarray(n)
    if np.any(n < 0):
        raise ValueError("n must be non-negative")
    out = np.log(n + 2.0)
    return float(out) if out.ndim == 0 else out


def farey_tail(n):
    """``mu(K_1 ∩ {phi > n}) = log((n + 2) / (n + 1))``."""
    n = np.asarray(n)
    if np.any(n < 0):
        raise ValueError("n must be non-negative")
    out = np.log1p(1.0 / (n + 1.0))
    return float(out) if out.ndim == 0 else out


class WanderingSequence:
    """Tail masses ``m_k`` and their partial sums ``W_n = m_0 + ... + m_n``."""

    closed_form: str | None = None
    length: int | None = None

    def tail(self, k):
        raise NotImplementedError

    def cumulative(self, n):
        raise NotImplementedError

    def _check(self, n):
        n = np.asarray(n)
        if np.any(n < 0):
            raise ValueError("index must be non-negative")
        if self.length is not None and np.any(n >= self.length):
            raise WanderingTooShort(
                f"wandering sequence has {self.length} terms, needed index {int(np.max(n))}"
            )
        return n

    def __call__(self, n):
        return self.cumulative(n)


class FareyWandering(WanderingSequence):
    closed_form = "log(n+2)"

    def tail(self, k):
        return farey_tail(self._check(k))

    def cumulative(self, n):
        return farey_wandering(self._check(n))


class TabulatedWandering(WanderingSequence):
    """Wandering sequence from an explicit finite list of tail masses."""

    def __init__(self, tails):
        tails = np.asarray(tails, dtype=float)
        if tails.ndim != 1 or tails.size == 0:
            raise ValueError("need a non-empty 1-d array of tail masses")
        if np.any(tails <= 0) or np.any(np.diff(tails) > 0):
            raise ValueError("tail masses must be positive and nonincreasing")
        self._tails = tails
        self._cum = np.cumsum(tails)
        self.length = tails.size

    def tail(self, k):
        k = self._check(k)
        out = self._tails[k]
        return float(out) if np.ndim(out) == 0 else out

    def cumulative(self, n):
        n = self._check(n)
        out = self._cum[n]
        return float(out) if np.ndim(out) == 0 else out
