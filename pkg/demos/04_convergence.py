# How many columns until the average entropy sits on the Page value?
#
# Start every trajectory in |0...0>, average over trials, and record the
# first depth after which the curve stays within eps for 10 consecutive
# depths.  The first few columns' outcomes are enumerated exactly when the
# trial budget allows it, which removes most of the noise at small depth.
# Takes about a minute.

import numpy as np

from wgsrandom import convergence_time

ns = [2, 3, 4, 5, 6]
rows = []
for n in ns:
    trials = 2**20 if n <= 4 else 10**5
    res = convergence_time(n, 1, epsilon=[0.05, 0.02, 0.01], trials=trials, max_depth=40, seed=0)
    rows.append([r.t_epsilon for r in res])
    print(n, rows[-1])

t = np.array([r[-1] for r in rows], dtype=float)
slope, icpt = np.polyfit(ns, t, 1)
print(f"eps=0.01: t ~ {slope:.2f} N + {icpt:.2f}, r = {np.corrcoef(ns, t)[0, 1]:.3f}")
