"""Double-precision orbit Monte Carlo for the lasota-yorke and thaler0 maps.

The exact engines in :mod:`waitlaws.processes` are too slow for thousands
of orbits of length 10^6. These kernels iterate in float64 from a uniform
initial point and report a status per sample:

``OK``        the waiting record is complete
``CENSORED``  ``V_n`` is known to exceed ``cap`` but its value is not computed
``DEGRADED``  float arithmetic could no longer decide membership of the
              reference set (orbit collapsed to 0 or 1, or landed within a
              few ulps of the thaler0 branch point)

For thaler0 a step with ``x + x^2 exp(-1/x) == x`` in floating point means
``x < 0.028``, so the true escape from the laminar region takes longer than
``exp(1/x) > 10^15`` steps; such samples are censored rather than run.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .maps import thaler_boundary
from .parallel import DEFAULT_BLOCK, run_blocks
from .processes import WaitingSample

__all__ = ["OK", "CENSORED", "DEGRADED", "thaler_samples", "lasota_yorke_samples",
           "thaler_kernel", "lasota_yorke_kernel"]

OK, CENSORED, DEGRADED = 0, 1, 2

_NEAR = 4e-16  # |x - a| below this cannot be classified in float64


@njit(nogil=True, cache=True)
def thaler_kernel(gen, N, n, cap, a):
    Z = np.zeros(N, np.int64)
    Y = np.zeros(N, np.int64)
    in_a = np.zeros(N, np.bool_)
    status = np.zeros(N, np.int8)
    for i in range(N):
        x = 1.0 - gen.random()
        t = 0
        z = 0
        seen = False
        while True:
            if abs(x - a) < 4e-16:
                status[i] = 2
                break
            if x > a:
                if t <= n:
                    z = t
                    seen = True
                else:
                    Y[i] = t
                    break
                x = (x - a) / (1.0 - a)
            else:
                x2 = x + x * x * math.exp(-1.0 / x)
                if x2 == x:
                    status[i] = 1
                    break
                x = x2
            t += 1
            if t > n and t > z + cap:
                status[i] = 1
                break
        Z[i] = z
        in_a[i] = seen
    return Z, Y, in_a, status


@njit(nogil=True, cache=True)
def lasota_yorke_kernel(gen, N, n, cap):
    Z = np.zeros(N, np.int64)
    Y = np.zeros(N, np.int64)
    in_a = np.zeros(N, np.bool_)
    status = np.zeros(N, np.int8)
    for i in range(N):
        x = 1.0 - gen.random()
        t = 0
        z = 0
        seen = False
        while True:
            if x == 0.0 or x == 1.0:
                status[i] = 2
                break
            if x <= 0.5:
                # laminar jump: least k with x / (1 - k x) > 1/2
                k = math.floor((1.0 - 2.0 * x) / x) + 1.0
                while k > 1.0 and x / (1.0 - (k - 1.0) * x) > 0.5:
                    k -= 1.0
                while x / (1.0 - k * x) <= 0.5:
                    k += 1.0
                x = min(x / (1.0 - k * x), 1.0)
                t += np.int64(k)
                continue
            if t <= n:
                z = t
                seen = True
            else:
                Y[i] = t
                break
            if t > z + cap:
                status[i] = 1
                break
            x = 2.0 * x - 1.0
            t += 1
        Z[i] = z
        in_a[i] = seen
    return Z, Y, in_a, status


def _pack(n, parts):
    Z, Y, in_a, status = parts
    ok = status == OK
    # placeholders keep WaitingSample's Z <= n < Y shape for unfinished samples
    Yf = np.where(ok, Y, n + 1)
    Zf = np.where(ok, Z, 0)
    ws = WaitingSample(n, Zf, Yf, in_a & ok)
    ws.extra["status"] = status
    return ws


def thaler_samples(n: int, samples: int, cap: int, seed: int = 0, jobs: int = 1,
                   block: int = 256) -> WaitingSample:
    """thaler0 waiting records at horizon ``n``; see ``extra["status"]``."""
    if cap < n:
        raise ValueError("iteration cap must be at least the horizon")
    a = thaler_boundary()
    parts = run_blocks(lambda g, m: thaler_kernel(g, m, n, cap, a), samples, seed,
                       stream=3, jobs=jobs, block=block)
    return _pack(n, parts)


def lasota_yorke_samples(n: int, samples: int, cap: int | None = None, seed: int = 0,
                         jobs: int = 1, block: int = DEFAULT_BLOCK) -> WaitingSample:
    """lasota-yorke waiting records at horizon ``n`` (laminar phases jumped)."""
    cap = 2**62 if cap is None else cap
    if cap < n:
        raise ValueError("iteration cap must be at least the horizon")
    parts = run_blocks(lambda g, m: lasota_yorke_kernel(g, m, n, cap), samples, seed,
                       stream=4, jobs=jobs, block=block)
    return _pack(n, parts)
