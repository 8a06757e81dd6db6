"""
Near-layer power control
========================

With both layers fixed, throughput depends only on how much power goes to
the near layer. Compare the fixed-point solver with a dense grid.
"""

import numpy as np

from nomaidnc.power import Bottleneck, bounds, feasibility, grid_oracle, ife_optimize, phi

sizes = (6, 2)                       # receivers served by the far / near layer
b = Bottleneck(inv_snr_far=0.8, inv_snr_near=0.01)
p_max, r_min = 10.0, 0.4

print("feasible:", feasibility(b, r_min, p_max))
bn = bounds(b, r_min, p_max)
print(f"near-layer power must lie in [{bn.low:.4f}, {bn.up:.4f}]")

trace = []
p_star = ife_optimize(sizes, b, bn, p_max, trace=trace)
p_grid = grid_oracle(sizes, b, bn, p_max, steps=10**5)
print(f"fixed point after {len(trace) - 1} steps: p = {p_star:.5f}, phi = {phi(p_star, sizes, b, p_max):.5f}")
print(f"grid search:                  p = {p_grid:.5f}, phi = {phi(p_grid, sizes, b, p_max):.5f}")

for p in np.linspace(bn.low, bn.up, 6):
    print(f"  p = {p:7.4f}  phi = {phi(p, sizes, b, p_max):.4f}")
