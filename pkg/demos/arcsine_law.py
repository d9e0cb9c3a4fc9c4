"""Renewal surrogate at alpha = 1/2: the rescaled spread and the arcsine law.

Simulates heavy-tailed renewal paths, rescales the waiting records through
the wandering sequence, and compares the result with the closed-form
arcsine distribution function.

    python3 demos/arcsine_law.py
"""

import numpy as np

from waitlaws.distort import distorted_arrays
from waitlaws.limits import cdf, limit_law
from waitlaws.renewal import renewal_wandering, simulate
from waitlaws.stats import Ecdf, dkw_epsilon, ks_distance

alpha, n, N = 0.5, 10**5, 20000
(sample,) = simulate(alpha, [n], N, seed=1)
theta = distorted_arrays(sample, renewal_wandering(alpha))["theta"]

print(f"{N} paths to horizon {n}")
print(f"KS to the arcsine law: {ks_distance(Ecdf(theta), limit_law('theta', alpha)):.4f}"
      f"  (99% sampling band {dkw_epsilon(N):.4f})")
print("   x   empirical  arcsine")
for x in (0.1, 0.3, 0.5, 0.7, 0.9):
    print(f"  {x:.1f}   {np.mean(theta <= x):.4f}    {cdf(limit_law('theta', alpha), x):.4f}")
