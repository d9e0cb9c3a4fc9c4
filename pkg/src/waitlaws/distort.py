"""Distorted waiting-time processes.

With ``F(k) = W_k`` and ``G(k) = W_k / k`` for a wandering sequence ``W``:

    lambda = F(V) / F(n)          gamma = G(V) / G(n)
    delta  = F(Y - n) / F(n)      theta = G(Y) / G(n)

These have non-degenerate limits even when ``V_n / n`` does not. For the
two critical regimes there are also four constant-free statistics built
from logarithms only (:func:`critical_statistics`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .maps import WanderingSequence
from .processes import WaitingRecord, WaitingSample

__all__ = [
    "DistortedValues",
    "distorted",
    "distorted_arrays",
    "critical_statistics",
    "critical_arrays",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("lambda", "gamma", "delta", "theta")


@dataclass(frozen=True)
class DistortedValues:
    lam: float
    gamma: float
    delta: float
    theta: float

    def as_dict(self) -> dict:
        return dict(zip(CSV_COLUMNS, (self.lam, self.gamma, self.delta, self.theta)))


def distorted(record: WaitingRecord, W: WanderingSequence) -> DistortedValues:
    """Distorted values of one waiting record.

    Raises :class:`~waitlaws.maps.WanderingTooShort` if ``W`` is tabulated
    and does not reach ``max(V, Y)``.
    """
    n, V, Y = record.n, record.V, record.Y
    if n < 1:
        raise ValueError("the distorted processes need n >= 1")
    Wn = W(n)
    WV, WY = W(V), W(Y)
    return DistortedValues(
        lam=WV / Wn,
        gamma=(WV / V) * (n / Wn),
        delta=W(Y - n) / Wn,
        theta=(WY / Y) * (n / Wn),
    )


def distorted_arrays(sample: WaitingSample, W: WanderingSequence) -> dict:
    """Vectorized :func:`distorted` over a sample; returns arrays keyed by name."""
    n = sample.n
    if n < 1:
        raise ValueError("the distorted processes need n >= 1")
    V = sample.V.astype(float)
    Y = sample.Y.astype(float)
    Wn = W(n)
    WV = np.asarray(W(sample.V), dtype=float)
    WY = np.asarray(W(sample.Y), dtype=float)
    return {
        "lambda": WV / Wn,
        "gamma": (WV / V) * (n / Wn),
        "delta": np.asarray(W(sample.Y - n), dtype=float) / Wn,
        "theta": (WY / Y) * (n / Wn),
    }


def critical_statistics(record: WaitingRecord, n: int | None = None) -> tuple:
    """``(log V/log n, log n/log V, log(Y-n)/log n, log n/log Y)``.

    ``V = 1`` gives 0 for the first and ``inf`` for the second entry.
    """
    n = record.n if n is None else n
    if n < 2:
        raise ValueError("n must be at least 2")
    ln = math.log(n)
    lv = math.log(record.V)
    return (
        lv / ln,
        ln / lv if lv > 0 else math.inf,
        math.log(record.Y - n) / ln,
        ln / math.log(record.Y),
    )


def critical_arrays(sample: WaitingSample) -> dict:
    n = sample.n
    if n < 2:
        raise ValueError("n must be at least 2")
    ln = math.log(n)
    lv = np.log(sample.V.astype(float))
    with np.errstate(divide="ignore"):
        inv = np.where(lv > 0, ln / np.where(lv > 0, lv, 1.0), np.inf)
    return {
        "logV_logn": lv / ln,
        "logn_logV": inv,
        "logYn_logn": np.log((sample.Y - n).astype(float)) / ln,
        "logn_logY": ln / np.log(sample.Y.astype(float)),
    }
