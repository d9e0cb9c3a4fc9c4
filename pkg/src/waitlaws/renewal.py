"""Heavy-tailed renewal surrogate with ``P(tau > n) = n^(-alpha)``.

Visits happen at ``S_0 = 0`` and ``S_k = tau_1 + ... + tau_k`` with i.i.d.
waiting times ``tau = ceil(U^(-1/alpha))``. The matching wandering
sequence has tail masses ``m_0 = 1`` and ``m_k = k^(-alpha)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from numba import njit

from .maps import WanderingSequence
from .parallel import run_blocks
from .processes import VisitTimes, WaitingSample

__all__ = [
    "RenewalConfig",
    "sample_tau",
    "sample_taus",
    "renewal_visits_from_taus",
    "renewal_visits",
    "PowerTailWandering",
    "renewal_wandering",
    "simulate",
    "TAU_CLAMP",
]

# waiting times beyond this are clamped; any horizon we use is far below it
TAU_CLAMP = 4 * 10**18


@dataclass(frozen=True)
class RenewalConfig:
    alpha: float
    horizon: int
    samples: int
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.samples < 1:
            raise ValueError("need at least one sample")


def sample_tau(u: float, alpha: float) -> int:
    """``ceil(u^(-1/alpha))`` for ``u`` in (0, 1]."""
    if not 0 < u <= 1:
        raise ValueError("u must lie in (0, 1]")
    if -math.log(u) / alpha >= math.log(TAU_CLAMP):
        return TAU_CLAMP
    return max(1, math.ceil(u ** (-1.0 / alpha)))


def sample_taus(gen: np.random.Generator, size: int, alpha: float) -> np.ndarray:
    u = 1.0 - gen.random(size)
    v = u ** (-1.0 / alpha)
    return np.where(v >= TAU_CLAMP, TAU_CLAMP, np.maximum(np.ceil(np.minimum(v, TAU_CLAMP)), 1)).astype(np.int64)


def renewal_visits_from_taus(taus, horizon: int) -> VisitTimes:
    """Visits ``0, S_1, S_2, ...`` up to and including the first ``S_k > horizon``."""
    times = [0]
    s = 0
    for t in taus:
        if s > horizon:
            break
        s += int(t)
        times.append(s)
    if s <= horizon:
        raise ValueError(f"waiting times sum to {s}, not past horizon {horizon}")
    return VisitTimes(times, s)


def renewal_visits(cfg: RenewalConfig, index: int) -> VisitTimes:
    """Visit times of sample ``index``; reproducible from ``(seed, index)``."""
    gen = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(0xAE, index)))
    times = [0]
    s = 0
    while s <= cfg.horizon:
        s += sample_tau(1.0 - gen.random(), cfg.alpha)
        times.append(s)
    return VisitTimes(times, s)


# --- wandering sequence -----------------------------------------------------

_EM_CUTOFF = 1 << 16


@lru_cache(maxsize=16)
def _table(alpha: float) -> np.ndarray:
    k = np.arange(_EM_CUTOFF + 1, dtype=float)
    m = np.empty_like(k)
    m[0] = 1.0
    m[1:] = k[1:] ** -alpha
    return np.cumsum(m)


@lru_cache(maxsize=16)
def _zeta(alpha: float) -> float:
    return float(mpmath.zeta(alpha))


class PowerTailWandering(WanderingSequence):
    """``W_n = 1 + sum_{k=1}^n k^(-alpha)``.

    Exact summation up to 2^16, Euler-Maclaurin with ``zeta(alpha)`` beyond.
    """

    def __init__(self, alpha: float):
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        self.alpha = float(alpha)
        self.closed_form = f"1 + sum k^-{self.alpha}"

    def tail(self, k):
        k = np.asarray(self._check(k), dtype=float)
        out = np.where(k == 0, 1.0, np.maximum(k, 1.0) ** -self.alpha)
        return float(out) if out.ndim == 0 else out

    def cumulative(self, n):
        n = self._check(n)
        a = self.alpha
        tab = _table(a)
        small = n <= _EM_CUTOFF
        x = np.maximum(np.asarray(n, dtype=float), 1.0)
        big = 1.0 + _zeta(a) + x ** (1 - a) / (1 - a) + 0.5 * x ** -a - a / 12 * x ** (-a - 1)
        out = np.where(small, tab[np.where(small, n, 0)], big)
        return float(out) if out.ndim == 0 else out


def renewal_wandering(alpha: float) -> PowerTailWandering:
    return PowerTailWandering(alpha)


# --- Monte Carlo ------------------------------------------------------------

@njit(nogil=True, cache=True)
def _renewal_kernel(gen, N, horizons, alpha, clamp):
    H = horizons.size
    Z = np.empty((N, H), np.int64)
    Y = np.empty((N, H), np.int64)
    inv = -1.0 / alpha
    for i in range(N):
        s = 0
        h = 0
        while h < H:
            v = (1.0 - gen.random()) ** inv
            tau = clamp if v >= clamp else max(np.int64(1), np.int64(np.ceil(v)))
            nxt = s + tau
            while h < H and nxt > horizons[h]:
                Z[i, h] = s
                Y[i, h] = nxt
                h += 1
            s = nxt
    return Z, Y


def simulate(alpha: float, horizons, samples: int, seed: int = 0, jobs: int = 1,
             block: int = 4096) -> list[WaitingSample]:
    """One :class:`WaitingSample` per horizon, all from the same renewal paths.

    Samples are generated in fixed blocks with independently seeded
    generators, so the result does not depend on ``jobs``.
    """
    RenewalConfig(alpha, int(min(horizons)), samples, seed)
    hz = np.asarray(sorted(set(int(h) for h in horizons)), dtype=np.int64)
    if hz[-1] * 4 >= TAU_CLAMP:
        raise ValueError("horizon too large for 64-bit renewal times")
    Z, Y = run_blocks(
        lambda gen, m: _renewal_kernel(gen, m, hz, float(alpha), np.int64(TAU_CLAMP)),
        samples, seed, stream=1, jobs=jobs, block=block,
    )
    order = {int(h): j for j, h in enumerate(hz)}
    out = []
    for h in horizons:
        j = order[int(h)]
        out.append(WaitingSample(int(h), Z[:, j], Y[:, j], np.ones(samples, bool)))
    return out
