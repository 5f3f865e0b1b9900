# Entropy histograms against Haar-random states.
#
# Post-burn-in samples from one trajectory, and from many independent
# trajectories, compared with directly sampled Haar states.

import numpy as np

from wgsrandom import ExperimentSpec, SchemeConfig, distribution_distance
from wgsrandom.entanglement import batch_entropy_bits, haar_batch
from wgsrandom.experiments import entropy_samples, entropy_histogram_experiment

N, NA = 6, 3
haar = batch_entropy_bits(haar_batch(N, 10_000, np.random.default_rng(7)), N, NA)

cfg = SchemeConfig(rows=N, partition_size=NA, seed=2)
for mode, extra in [("trajectory", {}), ("independent", {"trajectories": 10_000, "burnin_steps": 60})]:
    kw = {"burnin_steps": 10_000, "sample_steps": 10_000, **extra}
    spec = ExperimentSpec(cfg, mode=mode, **kw)
    x = entropy_samples(spec)
    d = distribution_distance(x, haar, bins=500, range=(0.0, NA))
    print(f"{mode:12s} KS={d.ks:.4f}  TV={d.tv:.3f}  mean={x.mean():.4f} vs haar {haar.mean():.4f}")

# coarse text histogram, 15 bins over [0, N_A]
h = entropy_histogram_experiment(ExperimentSpec(cfg, burnin_steps=1000, sample_steps=10_000, bins=15))
for lo, p in zip(h.bin_edges, h.probabilities):
    print(f"{lo:5.2f} {'#' * int(60 * p / h.probabilities.max())}")
