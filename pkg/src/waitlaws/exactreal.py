"""Continued-fraction digit streams computed in exact integer arithmetic.

Three sources are supported:

* an explicit finite list of digits (a rational point; the stream terminates),
* a preperiod/period description (a quadratic irrational, never terminates),
* a lazily refined random dyadic interval, i.e. a uniform random real in
  (0, 1) whose binary digits are drawn on demand from a seeded PCG64
  generator.

Digits of the dyadic source are emitted only once every point of the
current interval shares them, so the stream is the exact expansion of the
underlying random real regardless of how the refinement is chunked.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, cycle
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "DEFAULT_MAX_BITS",
    "StreamTerminated",
    "PrecisionBudgetExceeded",
    "DyadicInterval",
    "DigitStream",
    "ExplicitStream",
    "PeriodicStream",
    "DyadicStream",
    "cf_digits",
    "from_rational",
    "convergents",
    "digits_until_sum_exceeds",
    "digits_to_json",
    "digits_from_json",
]

DEFAULT_MAX_BITS = 4096


class StreamTerminated(Exception):
    """The expansion ended: the stream describes a rational point."""


class PrecisionBudgetExceeded(RuntimeError):
    """A dyadic sample needed more random bits than its cap allows."""


@dataclass(frozen=True)
class DyadicInterval:
    """The half-open interval ``[a / 2**B, (a + 1) / 2**B)``."""

    numerator: int
    bits: int

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("a dyadic interval needs at least one bit")
        if not 0 <= self.numerator < (1 << self.bits):
            raise ValueError("numerator out of range for the given bit count")

    @property
    def lower(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.bits)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.numerator + 1, 1 << self.bits)

    @property
    def width(self) -> Fraction:
        return Fraction(1, 1 << self.bits)

    def refine(self, bit: int) -> "DyadicInterval":
        """Keep the lower (bit 0) or upper (bit 1) half."""
        if bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        return DyadicInterval(2 * self.numerator + bit, self.bits + 1)

    def __contains__(self, x) -> bool:
        return self.lower <= x < self.upper


def _check_digits(digits: Iterable[int]) -> list[int]:
    out = [int(d) for d in digits]
    for d in out:
        if d < 1:
            raise ValueError(f"continued-fraction digits must be >= 1, got {d}")
    return out


class DigitStream:
    """Stateful, single-owner source of continued-fraction digits.

    Subclasses implement :meth:`_produce`; the base class records what has
    been emitted and turns the stream into an iterator that stops at
    termination.
    """

    def __init__(self):
        self.digits: list[int] = []
        self.terminated = False

    def _produce(self) -> int:
        raise NotImplementedError

    def next_digit(self) -> int:
        """Return the next digit.

        Raises :class:`StreamTerminated` when the expansion has ended.
        """
        if self.terminated:
            raise StreamTerminated("continued-fraction expansion already terminated")
        try:
            d = self._produce()
        except StreamTerminated:
            self.terminated = True
            raise
        self.digits.append(d)
        return d

    def take(self, k: int) -> list[int]:
        """The first ``k`` digits of the stream (fewer if it terminates)."""
        while len(self.digits) < k:
            try:
                self.next_digit()
            except StreamTerminated:
                break
        return self.digits[:k]

    def __iter__(self) -> Iterator[int]:
        i = 0
        while True:
            if i < len(self.digits):
                yield self.digits[i]
            else:
                try:
                    yield self.next_digit()
                except StreamTerminated:
                    return
            i += 1


class ExplicitStream(DigitStream):
    """A finite digit list; terminates after the last digit."""

    def __init__(self, digits: Sequence[int]):
        super().__init__()
        self._source = _check_digits(digits)

    def _produce(self) -> int:
        i = len(self.digits)
        if i >= len(self._source):
            raise StreamTerminated("rational point: expansion has ended")
        return self._source[i]


class PeriodicStream(DigitStream):
    """Eventually periodic digits ``preperiod, period, period, ...``."""

    def __init__(self, period: Sequence[int], preperiod: Sequence[int] = ()):
        super().__init__()
        period = _check_digits(period)
        if not period:
            raise ValueError("period must be non-empty")
        self.period = tuple(period)
        self.preperiod = tuple(_check_digits(preperiod))
        self._it = chain(self.preperiod, cycle(self.period))

    def _produce(self) -> int:
        return next(self._it)


class DyadicStream(DigitStream):
    """Digits of a uniform random real refined lazily bit by bit.

    The real is ``x = 0.b1 b2 b3 ...`` in binary, where the bits are the
    most-significant-first bits of consecutive 64-bit outputs of
    ``PCG64(seed)``. ``chunk_bits`` only controls how many bits are appended
    per refinement; it never changes the emitted digits.
    """

    def __init__(self, seed: int, max_bits: int = DEFAULT_MAX_BITS, chunk_bits: int = 32):
        super().__init__()
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if max_bits < 1 or chunk_bits < 1:
            raise ValueError("max_bits and chunk_bits must be positive")
        self.seed = seed
        self.max_bits = int(max_bits)
        self.chunk_bits = int(chunk_bits)
        self._bitgen = np.random.PCG64(seed)
        self._word = 0
        self._word_left = 0
        self._a = 0
        self._bits = 0
        # convergents p_{k-1}/q_{k-1} and p_k/q_k of the emitted prefix
        self._p0, self._q0, self._p1, self._q1 = 1, 0, 0, 1

    @property
    def bits_used(self) -> int:
        return self._bits

    @property
    def interval(self) -> DyadicInterval:
        if self._bits == 0:
            raise ValueError("no bits drawn yet")
        return DyadicInterval(self._a, self._bits)

    def cylinder(self) -> tuple[Fraction, Fraction]:
        """Closed bounds of the set of reals with the emitted digit prefix."""
        a = Fraction(self._p1, self._q1)
        b = Fraction(self._p1 + self._p0, self._q1 + self._q0)
        return (a, b) if a <= b else (b, a)

    def _take_bits(self, m: int) -> int:
        out = 0
        while m > 0:
            if self._word_left == 0:
                self._word = int(self._bitgen.random_raw())
                self._word_left = 64
            k = min(m, self._word_left)
            shift = self._word_left - k
            out = (out << k) | ((self._word >> shift) & ((1 << k) - 1))
            self._word_left -= k
            m -= k
        return out

    def _refine(self):
        if self._bits >= self.max_bits:
            raise PrecisionBudgetExceeded(
                f"digit {len(self.digits) + 1} undecided after {self._bits} bits "
                f"(cap {self.max_bits})"
            )
        m = min(self.chunk_bits, self.max_bits - self._bits)
        self._a = (self._a << m) | self._take_bits(m)
        self._bits += m

    def _digit_at(self, num: int, den: int):
        # floor(1 / G^k(num/den)) for the current prefix, None if G^k(.) = 0
        top = self._p1 * den - self._q1 * num
        bottom = self._q0 * num - self._p0 * den
        if bottom < 0:
            top, bottom = -top, -bottom
        if top <= 0:
            return None
        return bottom // top

    def _produce(self) -> int:
        while True:
            if self._bits > 0:
                den = 1 << self._bits
                lo = self._digit_at(self._a, den)
                hi = self._digit_at(self._a + 1, den)
                if lo is not None and lo == hi:
                    d = lo
                    self._p0, self._p1 = self._p1, d * self._p1 + self._p0
                    self._q0, self._q1 = self._q1, d * self._q1 + self._q0
                    return d
            self._refine()


def cf_digits(x) -> list[int]:
    """Finite continued-fraction digits of a rational ``x`` in ``[0, 1]``.

    The expansion is the one produced by iterating the Gauss map, so its
    last digit is at least 2 unless ``x == 1``; ``x == 0`` has no digits.
    """
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError("x must lie in [0, 1]")
    num, den = x.numerator, x.denominator
    out = []
    while num:
        d = den // num
        out.append(d)
        num, den = den - d * num, num
    return out


def from_rational(x) -> ExplicitStream:
    return ExplicitStream(cf_digits(x))


def convergents(digits: Sequence[int]) -> list[Fraction]:
    """Convergents ``p_k / q_k`` of ``[0; d1, d2, ...]`` for k = 1..len."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    out = []
    for d in digits:
        p0, p1 = p1, d * p1 + p0
        q0, q1 = q1, d * q1 + q0
        out.append(Fraction(p1, q1))
    return out


def digits_until_sum_exceeds(stream: DigitStream, n: int) -> list[int]:
    """Shortest prefix of ``stream`` whose digit sum exceeds ``n``.

    Raises :class:`StreamTerminated` if the stream ends first.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    out: list[int] = []
    total = 0
    i = 0
    while total <= n:
        if i < len(stream.digits):
            d = stream.digits[i]
        else:
            try:
                d = stream.next_digit()
            except StreamTerminated as exc:
                raise StreamTerminated(
                    f"expansion ended with digit sum {total} <= {n}"
                ) from exc
        out.append(d)
        total += d
        i += 1
    return out


def digits_to_json(digits: Sequence[int]) -> str:
    return json.dumps([int(d) for d in digits])


def digits_from_json(text: str) -> list[int]:
    data = json.loads(text)
    if not isinstance(data, list) or not all(isinstance(d, int) for d in data):
        raise ValueError("expected a JSON array of integers")
    return _check_digits(data)
