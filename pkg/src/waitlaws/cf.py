"""Continued-fraction processes: the digit-sum index psi_n and the straddling digit sigma_n.

``psi_n = max{p >= 0 : kappa_1 + ... + kappa_p <= n}`` and
``sigma_n = kappa_{psi_n + 1}``, the digit whose block of the digit-sum
process covers ``n``. For the Farey map,

    sigma_n = V_{n-1}        if x visited K_1 by time n-1,
    sigma_n = 1 + Y_{n-1}    otherwise,

which :func:`hauptlemma_check` verifies exactly on any digit list.

Large Monte Carlo runs use the digit chain of a Lebesgue-uniform x: given
the convergent denominators, ``r = q_{k-1} / q_k`` and

    P(kappa_{k+1} >= j | kappa_1..kappa_k) = (1 + r) / (j + r),

so each digit is one inverse-CDF draw followed by ``r <- 1 / (kappa + r)``.
This has the exact digit law of a uniform real (up to float rounding of
``r``) at about 10 ns per digit, against microseconds for exact dyadic
refinement. :class:`~waitlaws.exactreal.DyadicStream` remains the exact
reference and the two are cross-validated in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .limits import ld_rate_H
from .parallel import DEFAULT_BLOCK, run_blocks
from .processes import WaitingRecord, WaitingSample, visits_from_digits, waiting_record
from .stats import binomial_ci

__all__ = [
    "StraddleRecord",
    "psi",
    "sigma",
    "straddle_record",
    "HauptlemmaReport",
    "hauptlemma_check",
    "SigmaTailEstimate",
    "sigma_tail_estimate",
    "sigma_tail_reference",
    "chain_straddle",
    "chain_straddle_reference",
    "lebesgue_straddle",
    "farey_waiting_samples",
    "DigitsExhausted",
]


class DigitsExhausted(LookupError):
    """The digit list ends before its partial sums pass the horizon."""


@dataclass(frozen=True)
class StraddleRecord:
    n: int
    psi: int
    sigma: int
    in_A_prev: bool


def _locate(digits: Sequence[int], n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("n must be non-negative")
    s = 0
    for p, d in enumerate(digits):
        if s + d > n:
            return p, int(d)
        s += d
    raise DigitsExhausted(f"digit sum {s} does not exceed n = {n}")


def psi(digits: Sequence[int], n: int) -> int:
    """Number of complete digit blocks up to ``n``."""
    return _locate(digits, n)[0]


def sigma(digits: Sequence[int], n: int) -> int:
    """The straddling digit ``kappa_{psi_n + 1}``."""
    return _locate(digits, n)[1]


def straddle_record(digits: Sequence[int], n: int) -> StraddleRecord:
    p, d = _locate(digits, n)
    # visited K_1 by time n-1  <=>  kappa_1 - 1 <= n - 1  <=>  psi_n >= 1
    return StraddleRecord(n, p, d, p >= 1)


@dataclass(frozen=True)
class HauptlemmaReport:
    n: int
    sigma: int
    record: WaitingRecord
    expected: int

    @property
    def branch(self) -> str:
        return "V" if self.record.in_A_n else "1+Y"

    @property
    def passed(self) -> bool:
        return self.sigma == self.expected


def hauptlemma_check(digits: Sequence[int], n: int) -> HauptlemmaReport:
    """Compare ``sigma_n`` with ``V_{n-1}`` or ``1 + Y_{n-1}`` from the visit times."""
    if n < 1:
        raise ValueError("n must be at least 1")
    s = sigma(digits, n)
    rec = waiting_record(visits_from_digits(digits), n - 1)
    expected = rec.V if rec.in_A_n else 1 + rec.Y
    return HauptlemmaReport(n, s, rec, expected)


# --- sigma tail -------------------------------------------------------------

def sigma_tail_reference(n: int, x: float) -> float:
    """``H(x) / log(n + 2)``."""
    return ld_rate_H(x) / math.log(n + 2)


@dataclass(frozen=True)
class SigmaTailEstimate:
    n: int
    x: float
    samples: int
    hits: int
    ci: tuple
    reference: float
    beyond_hypothesis: bool

    @property
    def p_hat(self) -> float:
        return self.hits / self.samples

    @property
    def ratio(self) -> float:
        return self.p_hat / self.reference


def sigma_tail_estimate(sigmas, n: int, x: float, confidence: float = 0.95) -> SigmaTailEstimate:
    """Frequency of ``sigma_n > x n`` with a binomial interval.

    ``x >= 1`` is accepted but flagged: the asymptotic is only asserted
    for ``x`` in (0, 1) under a general initial law.
    """
    if x <= 0:
        raise ValueError("x must be positive")
    sigmas = np.asarray(sigmas)
    if sigmas.size == 0:
        raise ValueError("empty sample")
    hits = int(np.count_nonzero(sigmas > x * n))
    return SigmaTailEstimate(
        n, float(x), int(sigmas.size), hits, binomial_ci(hits, sigmas.size, confidence),
        sigma_tail_reference(n, x), x >= 1,
    )


# --- Lebesgue digit chain ---------------------------------------------------

@njit(nogil=True, cache=True)
def chain_straddle(gen, N, thresholds, lanes=8, buf_size=4096):
    """For each sample and threshold ``t``: (last partial sum <= t, next partial sum).

    ``lanes`` samples are advanced in an interleaved loop, which keeps the
    floating-point divisions of independent chains in flight together. A
    lane takes the next unstarted sample as soon as its current one passes
    the last threshold. With ``lanes == 1`` the uniforms are consumed in
    the same order as :func:`chain_straddle_reference`.
    """
    H = thresholds.size
    prev = np.empty((N, H), np.int64)
    nxt = np.empty((N, H), np.int64)
    tmax = thresholds[H - 1]
    r = np.zeros(lanes)
    s = np.zeros(lanes, np.int64)
    h = np.zeros(lanes, np.int64)
    idx = np.full(lanes, -1, np.int64)
    started = 0
    active = 0
    for l in range(lanes):
        if started < N:
            idx[l] = started
            started += 1
            active += 1
    buf = gen.random(buf_size)
    pos = 0
    while active > 0:
        for l in range(lanes):
            i = idx[l]
            if i < 0:
                continue
            if pos == buf_size:
                buf = gen.random(buf_size)
                pos = 0
            u = 1.0 - buf[pos]
            pos += 1
            rr = r[l]
            k = math.floor((1.0 + rr) / u - rr)
            if k < 1.0:
                k = 1.0
            s2 = s[l] + np.int64(k)
            hh = h[l]
            while hh < H and s2 > thresholds[hh]:
                prev[i, hh] = s[l]
                nxt[i, hh] = s2
                hh += 1
            h[l] = hh
            if s2 > tmax:
                s[l] = 0
                r[l] = 0.0
                h[l] = 0
                if started < N:
                    idx[l] = started
                    started += 1
                else:
                    idx[l] = -1
                    active -= 1
            else:
                s[l] = s2
                r[l] = 1.0 / (k + rr)
    return prev, nxt


def chain_straddle_reference(gen: np.random.Generator, N: int, thresholds) -> tuple:
    """Plain-Python single-chain version of :func:`chain_straddle`."""
    thresholds = [int(t) for t in thresholds]
    H = len(thresholds)
    prev = np.empty((N, H), np.int64)
    nxt = np.empty((N, H), np.int64)
    for i in range(N):
        r, s, h = 0.0, 0, 0
        while h < H:
            u = 1.0 - gen.random()
            k = max(1.0, math.floor((1.0 + r) / u - r))
            s2 = s + int(k)
            while h < H and s2 > thresholds[h]:
                prev[i, h], nxt[i, h] = s, s2
                h += 1
            s, r = s2, 1.0 / (k + r)
    return prev, nxt


def lebesgue_straddle(thresholds, samples: int, seed: int = 0, jobs: int = 1,
                      lanes: int = 8, block: int = DEFAULT_BLOCK) -> tuple:
    """Block-parallel :func:`chain_straddle` for a Lebesgue-uniform initial point."""
    th = np.asarray(thresholds, dtype=np.int64)
    if th.ndim != 1 or th.size == 0 or np.any(np.diff(th) <= 0) or th[0] < 0:
        raise ValueError("thresholds must be a strictly increasing list of non-negative integers")
    if th[-1] > 2**52:
        raise ValueError("thresholds beyond 2^52 exceed the float digit sampler")
    return run_blocks(lambda gen, m: chain_straddle(gen, m, th, lanes),
                      samples, seed, stream=2, jobs=jobs, block=block)


def farey_waiting_samples(horizons, samples: int, seed: int = 0, jobs: int = 1,
                          lanes: int = 8) -> list[WaitingSample]:
    """Farey waiting records (and straddling digits) for Lebesgue-uniform x.

    All horizons come from the same digit paths. Each returned sample
    carries ``extra["sigma"]``, the straddling digit ``sigma_n``.
    """
    hs = [int(h) for h in horizons]
    if any(h < 1 for h in hs):
        raise ValueError("horizons must be positive")
    # waiting record at n needs threshold n + 1; sigma_n needs threshold n
    th = sorted(set(hs) | {h + 1 for h in hs})
    prev, nxt = lebesgue_straddle(th, samples, seed, jobs=jobs, lanes=lanes)
    col = {t: j for j, t in enumerate(th)}
    out = []
    for n in hs:
        P, X = prev[:, col[n + 1]], nxt[:, col[n + 1]]
        in_a = P >= 1
        ws = WaitingSample(n, np.where(in_a, P - 1, 0), X - 1, in_a)
        ws.extra["sigma"] = nxt[:, col[n]] - prev[:, col[n]]
        out.append(ws)
    return out
