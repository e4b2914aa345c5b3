"""
Bjontegaard deltas in any direction
===================================

The classic BD metric averages the vertical gap between two interpolated RD
curves. Rotating the RD plane first turns the same machinery into a family of
deltas indexed by lambda: lambda = 0 is the usual distortion delta and
lambda = inf is the rate delta.
"""

import math

import numpy as np

from rdcbench import bd
from rdcbench.dataset import CodecDataset

rates = np.array([0.5, 1.0, 2.0, 4.0])
# B loses 1 dB of MSE to A at every rate
mse_a = 10 ** (np.array([23.0, 20.5, 18.0, 15.0]) / 10)
mse_b = mse_a * 10 ** 0.1
a = CodecDataset("A", tuple(zip(rates, mse_a, [300] * 4)), "curve")
b = CodecDataset("B", tuple(zip(rates, mse_b, [900] * 4)), "curve")

print("classic BD-PSNR  :", round(bd.bd_psnr(a, b), 6), "dB")
print("classic BD-rate  :", round(bd.bd_rate_percent(a, b).value, 3), "%")

# negative means A needs less of whatever the rotated ordinate measures
for lam in [0.0, 0.1, 1.0, 10.0, math.inf]:
    r = bd.delta_lambda(a, b, lam)
    print(f"delta(lambda={lam:>4}) = {r.value:+.4f} over [{r.t0:.3f}, {r.t1:.3f}]")

# the same idea on the rate-complexity and distortion-complexity planes
for name, res in bd.axis_deltas(a, b).items():
    print(f"{name}: {res.value:+.4f}" if not isinstance(res, Exception) else f"{name}: {type(res).__name__}")
