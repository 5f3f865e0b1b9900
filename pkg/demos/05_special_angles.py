# phi = pi and phi = 2pi do not randomize.
#
# 2pi switches the vertical gates off, so product inputs stay product.
# pi turns every column into a Clifford, so entropies are integers and the
# states are stabilizer states; compare the stabilizer entropy distribution.

import math

import numpy as np

from wgsrandom import phi_scan, stabilizer_entropy_pmf
from wgsrandom.experiments import simulate_entropy_trace

_, e = simulate_entropy_trace(5, 2, 2 * math.pi, 100, 0, range(4), "plus")
print("2pi: max entropy over 100 steps", e.max())

_, e = simulate_entropy_trace(6, 3, math.pi, 100, 0, range(64), "plus")
vals, counts = np.unique(np.round(e[1:], 9), return_counts=True)
print("pi: entropy values seen", vals.tolist(), (counts / counts.sum()).round(3).tolist())
print("random stabilizer pmf  ", stabilizer_entropy_pmf(6, 3).round(3).tolist())

grid = [k * math.pi / 8 for k in (1, 3, 5, 7, 8, 16)]
for row in phi_scan(4, 2, grid, depth=20, trials=2000):
    print(f"phi={row.phi / math.pi:5.3f} pi  |mean - page| = {row.abs_deviation_from_page:.4f}")
