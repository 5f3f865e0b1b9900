"""Entanglement entropy and its Haar and stabilizer reference statistics.

Entropies are in bits.  Subsystem A is always the first N_A rows, i.e.
qubits 0 .. N_A - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np
from scipy import stats

from .statevec import CLAMP_ATOL, NumericalError, StateVector, reduced_spectrum

__all__ = [
    "EntanglementSample",
    "EntanglementHistogram",
    "DistributionDistance",
    "entropy_from_spectrum",
    "vn_entropy_bits",
    "batch_entropy_bits",
    "page_average",
    "stabilizer_entropy_pmf",
    "haar_sample",
    "haar_batch",
    "build_histogram",
    "distribution_distance",
]


@dataclass(frozen=True)
class EntanglementSample:
    value: float
    step_index: int
    trajectory_id: int


@dataclass(frozen=True, eq=False)
class EntanglementHistogram:
    """Density-normalized histogram over evenly spaced bins.

    ``overflow`` counts samples that fell outside the range and were
    clamped into the first or last bin.
    """

    bin_edges: np.ndarray
    densities: np.ndarray
    sample_count: int
    overflow: int = 0

    @property
    def bin_widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def probabilities(self) -> np.ndarray:
        return self.densities * self.bin_widths

    @property
    def range(self) -> tuple[float, float]:
        return float(self.bin_edges[0]), float(self.bin_edges[-1])


@dataclass(frozen=True)
class DistributionDistance:
    ks: float
    tv: float


def entropy_from_spectrum(spectrum) -> float:
    """-sum p log2 p with 0 log 0 = 0."""
    p = np.asarray(spectrum, dtype=float)
    p = p[p > 0]
    return float(max(-(p * np.log2(p)).sum(), 0.0))


def vn_entropy_bits(state: StateVector, partition_size: int) -> float:
    """Von Neumann entropy of rows 0 .. partition_size - 1."""
    n = state.num_qubits
    if not 1 <= partition_size <= n - 1:
        raise ValueError(f"partition_size must lie in [1, {n - 1}]")
    return entropy_from_spectrum(reduced_spectrum(state, range(partition_size)))


def batch_entropy_bits(amplitudes: np.ndarray, n: int, partition_size: int) -> np.ndarray:
    """Entropies of a stack of states, shape (batch, 2**n) -> (batch,).

    Same cut as :func:`vn_entropy_bits`; this is the vectorized path used by
    the Monte Carlo experiments.
    """
    if not 1 <= partition_size <= n - 1:
        raise ValueError(f"partition_size must lie in [1, {n - 1}]")
    psi = np.asarray(amplitudes).reshape(-1, 2 ** (n - partition_size), 2**partition_size)
    # psi[t, b, a]; Gram matrix on the smaller side
    if partition_size <= n - partition_size:
        gram = psi.swapaxes(1, 2) @ psi.conj()
    else:
        gram = psi @ psi.conj().swapaxes(1, 2)
    if gram.shape[1] == 2:
        # closed form for a qubit: eigenvalues (1 +- sqrt(1 - 4 det)) / 2
        det = (gram[:, 0, 0] * gram[:, 1, 1]).real - np.abs(gram[:, 0, 1]) ** 2
        root = np.sqrt(np.clip(1.0 - 4.0 * det, 0.0, None))
        evals = np.stack([(1.0 - root) / 2, (1.0 + root) / 2], axis=1)
    else:
        evals = np.linalg.eigvalsh(gram)
    if evals.min() < -CLAMP_ATOL:
        raise NumericalError(f"reduced density matrix eigenvalue {evals.min():.3e} is negative")
    evals = np.clip(evals, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(evals > 0, evals * np.log2(np.where(evals > 0, evals, 1.0)), 0.0)
    return np.maximum(-terms.sum(axis=1), 0.0)


def page_average(n_a: int, n_b: int) -> float:
    """Haar-average entropy (bits) of N_A qubits in a pure N_A + N_B state.

    (1/ln 2) [ sum_{k=2^N_B+1}^{2^(N_A+N_B)} 1/k - (2^N_A - 1) / 2^(N_B+1) ]
    """
    if not 1 <= n_a <= n_b:
        raise ValueError(f"need 1 <= n_a <= n_b, got ({n_a}, {n_b})")
    m, big = 2**n_b, 2 ** (n_a + n_b)
    harmonic = math.fsum(1.0 / k for k in range(m + 1, big + 1))
    return (harmonic - (2**n_a - 1) / 2 ** (n_b + 1)) / math.log(2)


def _stabilizer_pmf_exact(n: int, n_a: int) -> list[Fraction]:
    prefactor = Fraction(
        math.prod(2**i + 1 for i in range(1, n_a + 1)),
        math.prod(2**k + 1 for k in range(n - n_a + 1, n + 1)),
    )
    out = []
    term = prefactor
    for s in range(n_a + 1):
        if s > 0:
            j = s
            term *= Fraction(
                (2 ** (n - n_a + 1 - j) - 1) * (2 ** (n_a + j) - 2 ** (2 * j - 1)),
                2 ** (2 * j) - 1,
            )
        out.append(term)
    return out


def stabilizer_entropy_pmf(n: int, n_a: int) -> np.ndarray:
    """P(S_A = s), s = 0 .. n_a, for a uniformly random n-qubit stabilizer state.

    Evaluated in exact rational arithmetic and rounded once at the end.
    """
    if not 1 <= n_a <= n - n_a:
        raise ValueError(f"need 1 <= n_a <= n - n_a, got n={n}, n_a={n_a}")
    return np.array([float(p) for p in _stabilizer_pmf_exact(n, n_a)])


def haar_sample(n: int, rng: np.random.Generator) -> StateVector:
    """Haar-random pure state: normalized vector of standard complex Gaussians."""
    if n < 1:
        raise ValueError("need at least one qubit")
    return StateVector.from_amplitudes(haar_batch(n, 1, rng)[0], normalize=False)


def haar_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random states as rows of a (count, 2**n) array."""
    dim = 2**n
    z = rng.standard_normal((count, 2, dim))
    amps = z[:, 0] + 1j * z[:, 1]
    return amps / np.linalg.norm(amps, axis=1, keepdims=True)


def build_histogram(samples: Sequence[float], bins: int, range: tuple[float, float]) -> EntanglementHistogram:
    """Bin samples evenly over ``range`` and rescale so the density integrates to 1."""
    x = np.asarray(samples, dtype=float).reshape(-1)
    if x.size == 0:
        raise ValueError("cannot histogram an empty sample list")
    if bins < 1:
        raise ValueError("bins must be positive")
    lo, hi = float(range[0]), float(range[1])
    if not hi > lo:
        raise ValueError("histogram range must have hi > lo")
    overflow = int(np.count_nonzero((x < lo) | (x > hi)))
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(np.clip(x, lo, hi), bins=edges)
    densities = counts / (x.size * np.diff(edges))
    return EntanglementHistogram(edges, densities, int(x.size), overflow)


Samples = Union[EntanglementHistogram, Sequence[float], np.ndarray]


def _binned(h: Samples, edges: np.ndarray | None) -> EntanglementHistogram:
    if isinstance(h, EntanglementHistogram):
        return h
    return build_histogram(h, len(edges) - 1, (edges[0], edges[-1]))


def distribution_distance(h1: Samples, h2: Samples, bins: int = 500, range: tuple[float, float] | None = None) -> DistributionDistance:
    """Two-sample Kolmogorov-Smirnov statistic and total-variation distance.

    Raw sample lists give an exact KS statistic and are binned on a common
    grid (``bins`` over ``range``, default the joint sample range) for TV.
    Histograms must share bin edges; their KS statistic is taken between the
    binned CDFs.
    """
    hist1 = isinstance(h1, EntanglementHistogram)
    hist2 = isinstance(h2, EntanglementHistogram)
    if hist1 or hist2:
        ref = h1 if hist1 else h2
        edges = ref.bin_edges
        b1, b2 = _binned(h1, edges), _binned(h2, edges)
        if b1.bin_edges.shape != b2.bin_edges.shape or not np.allclose(b1.bin_edges, b2.bin_edges):
            raise ValueError("histograms have mismatched bin edges")
        p1, p2 = b1.probabilities, b2.probabilities
        ks = float(np.abs(np.cumsum(p1) - np.cumsum(p2)).max())
        return DistributionDistance(ks=ks, tv=float(0.5 * np.abs(p1 - p2).sum()))

    x1 = np.asarray(h1, dtype=float).reshape(-1)
    x2 = np.asarray(h2, dtype=float).reshape(-1)
    if x1.size == 0 or x2.size == 0:
        raise ValueError("empty sample list")
    if range is None:
        lo = min(x1.min(), x2.min())
        hi = max(x1.max(), x2.max())
        if hi <= lo:
            hi = lo + 1.0
        range = (lo, hi)
    else:
        for x in (x1, x2):
            if x.min() < range[0] or x.max() > range[1]:
                raise ValueError("samples fall outside the common range")
    ks = float(stats.ks_2samp(x1, x2).statistic)
    p1 = build_histogram(x1, bins, range).probabilities
    p2 = build_histogram(x2, bins, range).probabilities
    return DistributionDistance(ks=ks, tv=float(0.5 * np.abs(p1 - p2).sum()))
