"""Farey map at the critical exponent: slow approach to the uniform law.

Draws Lebesgue-uniform starting points, records the waiting times at three
horizons, and prints the KS distance of the log-rescaled spread to the
uniform law. The distance shrinks like 1 / log n.

    python3 demos/critical_farey.py
"""

from waitlaws.cf import farey_waiting_samples
from waitlaws.distort import distorted_arrays
from waitlaws.maps import FareyWandering
from waitlaws.stats import ks_uniform

horizons = [10**3, 10**5, 10**7]
for ws in farey_waiting_samples(horizons, 5000, seed=2):
    lam = distorted_arrays(ws, FareyWandering())["lambda"]
    print(f"n = {ws.n:>9}:  KS(lambda, uniform) = {ks_uniform(lam):.4f}")
