"""Empirical distribution functions, KS distances, confidence bands, large-deviation ratios."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .limits import LimitLaw, cdf, ld_rate_H, ld_rate_joint

__all__ = [
    "Ecdf",
    "ks_distance",
    "ks_uniform",
    "dkw_epsilon",
    "binomial_ci",
    "LdEstimate",
    "ld_v_process",
    "ld_joint",
    "ld_sigma",
    "ReferenceExceedsOne",
]


class Ecdf:
    """Sorted sample with its empirical distribution function."""

    def __init__(self, samples):
        x = np.sort(np.asarray(samples, dtype=float).ravel(), kind="stable")
        if x.size == 0:
            raise ValueError("empty sample")
        if np.isnan(x).any():
            raise ValueError("sample contains NaN")
        self.values = x
        self.N = x.size

    def __call__(self, t):
        return np.searchsorted(self.values, t, side="right") / self.N

    def __len__(self):
        return self.N


def _ks_sorted(x: np.ndarray, F: np.ndarray) -> float:
    N = x.size
    i = np.arange(1, N + 1)
    # with ties only the last copy reaches i/N and only the first starts at (i-1)/N
    last = np.r_[x[1:] != x[:-1], True]
    first = np.r_[True, x[1:] != x[:-1]]
    upper = np.max((i / N - F)[last])
    lower = np.max((F - (i - 1) / N)[first])
    return float(max(upper, lower, 0.0))


def ks_distance(ecdf, law) -> float:
    """``sup_t |F_N(t) - F(t)|`` against a limit law or any CDF callable.

    Both one-sided gaps are evaluated at every jump point; exact for
    continuous ``F``.
    """
    if not isinstance(ecdf, Ecdf):
        ecdf = Ecdf(ecdf)
    x = ecdf.values
    if isinstance(law, LimitLaw):
        if law.kind == "pointmass":
            raise ValueError("KS against a point mass is not meaningful")
        if law.kind == "uniform01":
            F = np.clip(x, 0.0, 1.0)
        else:
            F = cdf(law, x)
    else:
        F = np.asarray(law(x), dtype=float)
    return _ks_sorted(x, F)


def ks_uniform(samples) -> float:
    return ks_distance(Ecdf(samples), LimitLaw("uniform01"))


def dkw_epsilon(N: int, delta: float = 0.01) -> float:
    """Half-width ``sqrt(log(2/delta) / (2N))`` of the DKW band."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return math.sqrt(math.log(2.0 / delta) / (2.0 * N))


def binomial_ci(hits: int, N: int, confidence: float = 0.95) -> tuple:
    """Clopper-Pearson interval for a binomial proportion."""
    ci = sps.binomtest(int(hits), int(N)).proportion_ci(confidence_level=confidence)
    return (float(ci.low), float(ci.high))


class ReferenceExceedsOne(ValueError):
    """The asymptotic reference probability is above 1 at this horizon."""


@dataclass(frozen=True)
class LdEstimate:
    n: int
    x: float
    y: float | None
    samples: int
    hits: int
    rate: float
    wandering: float
    ci: tuple

    @property
    def p_hat(self) -> float:
        return self.hits / self.samples

    @property
    def reference(self) -> float:
        return self.rate / self.wandering

    @property
    def ratio(self) -> float:
        """``p_hat * W_n / rate``; tends to 1."""
        return self.p_hat * self.wandering / self.rate


def _estimate(n, x, y, event, rate, wandering, confidence):
    if rate / wandering > 1:
        raise ReferenceExceedsOne(
            f"reference probability {rate / wandering:.3f} > 1 at n = {n}; increase n"
        )
    event = np.asarray(event, dtype=bool)
    if event.size == 0:
        raise ValueError("empty sample")
    hits = int(np.count_nonzero(event))
    return LdEstimate(n, float(x), y if y is None else float(y), int(event.size), hits,
                      float(rate), float(wandering), binomial_ci(hits, event.size, confidence))


def ld_v_process(sample, x: float, wandering: float | None = None,
                 confidence: float = 0.95) -> LdEstimate:
    """Frequency of ``V_n > x n`` against ``H(x) / W_n`` (default ``W_n = log(n+2)``)."""
    if x <= 0:
        raise ValueError("x must be positive")
    n = sample.n
    W = math.log(n + 2) if wandering is None else wandering
    return _estimate(n, x, None, sample.V > x * n, ld_rate_H(x), W, confidence)


def ld_joint(sample, x: float, y: float, wandering: float | None = None,
             confidence: float = 0.95) -> LdEstimate:
    """Frequency of ``n - Z_n >= x n`` and ``Y_n - n > y n`` against its rate."""
    rate = ld_rate_joint(x, y)
    n = sample.n
    W = math.log(n + 2) if wandering is None else wandering
    event = ((n - sample.Z) >= x * n) & ((sample.Y - n) > y * n)
    return _estimate(n, x, y, event, rate, W, confidence)


def ld_sigma(sigmas, n: int, x: float, confidence: float = 0.95) -> LdEstimate:
    """Frequency of ``sigma_n > x n`` against ``H(x) / log(n + 2)``."""
    if x <= 0:
        raise ValueError("x must be positive")
    return _estimate(n, x, None, np.asarray(sigmas) > x * n, ld_rate_H(x),
                     math.log(n + 2), confidence)
