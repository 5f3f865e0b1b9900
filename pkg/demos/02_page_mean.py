# Long single-trajectory runs settle onto the Haar (Page) average.
#
# Burn in, then average the entropy of the first N_A rows over the
# following steps.  At N = 6 this takes a couple of seconds per cut.

from wgsrandom import ExperimentSpec, SchemeConfig, burnin_mean_entropy, page_average
from wgsrandom.experiments import burnin_series

N = 6
for na in (1, 2, 3):
    cfg = SchemeConfig(rows=N, partition_size=na, seed=1)
    spec = ExperimentSpec(cfg, burnin_steps=10_000, sample_steps=10_000)
    series = burnin_series(spec)
    page = page_average(na, N - na)
    print(f"N_A={na}: mean={series.mean:.4f} +- {series.stderr:.4f}  page={page:.4f}  diff={series.mean - page:+.4f}")

# same thing through the convenience wrapper
print(burnin_mean_entropy(ExperimentSpec(SchemeConfig(rows=2, partition_size=1, seed=3))))
