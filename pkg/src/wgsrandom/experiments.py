"""Monte Carlo studies of the measurement-driven random circuit.

Three studies are provided: the long-run mean entropy of one trajectory
after burn-in, entropy histograms compared with Haar samples, and the depth
at which the trial-averaged entropy settles onto the Page value.

Many trajectories are simulated together as rows of one amplitude array.
A column step on a stack of states is

    psi <- ((psi * walsh[S]) @ hadamard_n) * phase_g

where ``walsh[S]`` is the Z^S sign pattern, ``hadamard_n`` the n-fold
Hadamard and ``phase_g`` the diagonal of the phi-gate chain.  Work is split
into fixed-size chunks of trajectories, so results do not depend on the
number of worker threads.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from .entanglement import (
    EntanglementHistogram,
    batch_entropy_bits,
    build_histogram,
    haar_batch,
    page_average,
)
from .scheme import DEFAULT_PHI, SchemeConfig, input_rng, outcome_bits

__all__ = [
    "INPUT_KINDS",
    "SAMPLING_MODES",
    "CHUNK_SIZE",
    "ExperimentSpec",
    "BurninResult",
    "ConvergenceResult",
    "PhiScanRow",
    "StabilizerPmf",
    "ColumnKernel",
    "initial_states",
    "simulate_entropy_trace",
    "burnin_series",
    "burnin_mean_entropy",
    "circuit_entropy_series",
    "entropy_samples",
    "entropy_histogram_experiment",
    "mean_entropy_curve",
    "auto_prefix_columns",
    "stratum_weights",
    "first_sustained_depth",
    "convergence_time",
    "phi_scan",
    "emit_csv",
    "emit_csv_text",
    "to_csv",
    "format_float",
]

INPUT_KINDS = ("haar", "zeros", "plus")
SAMPLING_MODES = ("trajectory", "independent")
CHUNK_SIZE = 4096
_BLOCK = 64


@dataclass(frozen=True)
class ExperimentSpec:
    """Protocol parameters around a :class:`SchemeConfig`.

    ``scheme.length`` is not used by the experiments; depth is set by
    ``burnin_steps``/``sample_steps`` or by ``max_depth`` in the
    convergence study.
    """

    scheme: SchemeConfig
    burnin_steps: int = 10_000
    sample_steps: int = 10_000
    trajectories: int = 1
    bins: int = 500
    epsilon: float = 0.01
    window: int = 10
    input_kind: str = "haar"
    mode: str = "trajectory"
    threads: int = 1

    def __post_init__(self):
        if self.scheme.rows < 2:
            raise ValueError("entanglement experiments need at least two rows")
        if self.burnin_steps < 0:
            raise ValueError("burnin_steps must be nonnegative")
        if self.sample_steps < 1 or self.trajectories < 1 or self.bins < 1:
            raise ValueError("sample_steps, trajectories and bins must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.window < 1:
            raise ValueError("window must be at least 1")
        if self.input_kind not in INPUT_KINDS:
            raise ValueError(f"input_kind must be one of {INPUT_KINDS}")
        if self.mode not in SAMPLING_MODES:
            raise ValueError(f"mode must be one of {SAMPLING_MODES}")
        if self.threads < 1:
            raise ValueError("threads must be positive")


@dataclass(frozen=True, eq=False)
class BurninResult:
    """Entropy after each recorded step of one trajectory."""

    steps: np.ndarray
    entropies: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.entropies.mean())

    @property
    def stderr(self) -> float:
        """Naive standard error; ignores autocorrelation between steps."""
        n = self.entropies.size
        if n < 2:
            return math.inf
        return float(self.entropies.std(ddof=1) / math.sqrt(n))


@dataclass(frozen=True)
class ConvergenceResult:
    n: int
    n_a: int
    phi: float
    epsilon: float
    window: int
    t_epsilon: Optional[int]
    trajectories_used: int
    max_depth: int

    @property
    def reached(self) -> bool:
        return self.t_epsilon is not None


@dataclass(frozen=True)
class PhiScanRow:
    phi: float
    depth: int
    trials: int
    mean_entropy: float
    abs_deviation_from_page: float


@dataclass(frozen=True, eq=False)
class StabilizerPmf:
    n: int
    n_a: int
    probabilities: np.ndarray


# --- batched column-step kernel ---

@lru_cache(maxsize=None)
def _walsh(n: int) -> np.ndarray:
    """walsh[s, x] = (-1)^popcount(s & x)."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]])
    w = np.ones((1, 1))
    for _ in range(n):
        w = np.kron(h, w)
    w.setflags(write=False)
    return w


@dataclass(frozen=True, eq=False)
class ColumnKernel:
    """Precomputed pieces of G(phi) M(S) for ``rows`` qubits."""

    rows: int
    phi: float
    signs: np.ndarray = field(init=False)
    hadamard: np.ndarray = field(init=False)
    phase: np.ndarray = field(init=False)
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        n = self.rows
        w = _walsh(n)
        idx = np.arange(2**n)
        # number of adjacent row pairs (j, j+1) with both bits set
        bonds = np.zeros(2**n, dtype=np.int64)
        for j in range(n - 1):
            bonds += ((idx >> j) & 1) & ((idx >> (j + 1)) & 1)
        object.__setattr__(self, "signs", w)
        object.__setattr__(self, "hadamard", w / math.sqrt(2**n))
        object.__setattr__(self, "phase", np.exp(-1j * self.phi * bonds))
        object.__setattr__(self, "weights", 1 << np.arange(n))

    def codes(self, bits: np.ndarray) -> np.ndarray:
        return bits.astype(np.int64) @ self.weights

    def step(self, psi: np.ndarray, codes: np.ndarray) -> np.ndarray:
        """Advance a (batch, 2**rows) stack by one column."""
        return ((psi * self.signs[codes]) @ self.hadamard) * self.phase


def initial_states(n: int, kind: str, seed: int, trajectory_ids: Sequence[int]) -> np.ndarray:
    """Input states for a block of trajectories, one row each.

    Haar inputs come from each trajectory's :func:`input_rng`.
    """
    dim = 2**n
    count = len(trajectory_ids)
    if kind == "zeros":
        psi = np.zeros((count, dim), dtype=complex)
        psi[:, 0] = 1.0
        return psi
    if kind == "plus":
        return np.full((count, dim), dim**-0.5, dtype=complex)
    if kind == "haar":
        return np.concatenate([haar_batch(n, 1, input_rng(seed, int(i))) for i in trajectory_ids])
    raise ValueError(f"unknown input kind {kind!r}")


def simulate_entropy_trace(
    n: int,
    n_a: int,
    phi: float,
    depth: int,
    seed: int,
    trajectory_ids: Sequence[int],
    input_kind: str,
    record: Callable[[int], bool] = lambda t: True,
    prefix_columns: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Run a block of independent trajectories for ``depth`` steps.

    Returns (recorded depths, entropies of shape (len(depths), batch)).
    Depth 0 is the input state.  Trajectory ``i`` uses the input and
    outcome streams of :func:`wgsrandom.scheme.trajectory_streams` ``(seed, i)``,
    except that with ``prefix_columns = k > 0`` its first k outcome vectors
    are the base-2^n digits of ``i mod 2^(n k)`` (see :func:`stratum_weights`).
    """
    ids = list(trajectory_ids)
    psi = initial_states(n, input_kind, seed, ids)
    kernel = ColumnKernel(n, phi)
    k = min(prefix_columns, depth)
    stratum = np.asarray(ids, dtype=np.int64) % (1 << (n * k))
    depths, rows = [], []
    if record(0):
        depths.append(0)
        rows.append(batch_entropy_bits(psi, n, n_a))
    for first in range(0, depth, _BLOCK):
        # outcomes are drawn a block of columns at a time to bound memory
        width = min(_BLOCK, depth - first)
        codes = kernel.codes(outcome_bits(seed, ids, first, width, n)).T
        for c in range(first, min(k, first + width)):
            codes[c - first] = (stratum >> (n * c)) & ((1 << n) - 1)
        for c in range(width):
            psi = kernel.step(psi, codes[c])
            t = first + c + 1
            if t % _BLOCK == 0:
                # keep the norm honest over long runs
                psi /= np.linalg.norm(psi, axis=1, keepdims=True)
            if record(t):
                depths.append(t)
                rows.append(batch_entropy_bits(psi, n, n_a))
    ent = np.array(rows).reshape(len(rows), len(ids))
    return np.array(depths, dtype=np.int64), ent


def _chunks(count: int) -> list[range]:
    return [range(lo, min(lo + CHUNK_SIZE, count)) for lo in range(0, count, CHUNK_SIZE)]


def _map_chunks(fn: Callable[[range], np.ndarray], count: int, threads: int) -> list[np.ndarray]:
    chunks = _chunks(count)
    if threads <= 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves chunk order, so aggregation order is fixed
        return list(pool.map(fn, chunks))


# --- studies ---

def _single_trajectory(spec: ExperimentSpec, seed: int) -> BurninResult:
    cfg = spec.scheme
    first = spec.burnin_steps + 1
    depths, ent = simulate_entropy_trace(
        cfg.rows,
        cfg.partition_size,
        cfg.phi,
        spec.burnin_steps + spec.sample_steps,
        seed,
        [0],
        spec.input_kind,
        record=lambda t: t >= first,
    )
    return BurninResult(steps=depths, entropies=ent[:, 0])


def burnin_series(spec: ExperimentSpec, seed: Optional[int] = None) -> BurninResult:
    """Trajectory 0: ``burnin_steps`` unrecorded steps, then the entropy after
    each of ``sample_steps`` further steps."""
    return _single_trajectory(spec, spec.scheme.seed if seed is None else seed)


def circuit_entropy_series(config: SchemeConfig, input_kind: str = "haar") -> BurninResult:
    """Entropy after each of the ``config.length`` steps of trajectory 0."""
    depths, ent = simulate_entropy_trace(
        config.rows, config.partition_size, config.phi, config.length, config.seed, [0], input_kind,
        record=lambda t: t >= 1,
    )
    return BurninResult(steps=depths, entropies=ent[:, 0])


def burnin_mean_entropy(spec: ExperimentSpec, seed: Optional[int] = None) -> float:
    return burnin_series(spec, seed).mean


def entropy_samples(spec: ExperimentSpec, seed: Optional[int] = None) -> np.ndarray:
    """Post-burn-in entropy samples.

    ``trajectory`` mode: one sample per step of trajectory 0.
    ``independent`` mode: the endpoint entropy of each of ``trajectories``
    runs of depth ``burnin_steps``.
    """
    seed = spec.scheme.seed if seed is None else seed
    if spec.mode == "trajectory":
        return _single_trajectory(spec, seed).entropies
    cfg = spec.scheme
    depth = spec.burnin_steps

    def run(chunk: range) -> np.ndarray:
        _, ent = simulate_entropy_trace(
            cfg.rows, cfg.partition_size, cfg.phi, depth, seed, chunk, spec.input_kind,
            record=lambda t: t == depth,
        )
        return ent[0]

    return np.concatenate(_map_chunks(run, spec.trajectories, spec.threads))


def entropy_histogram_experiment(spec: ExperimentSpec, seed: Optional[int] = None) -> EntanglementHistogram:
    samples = entropy_samples(spec, seed)
    return build_histogram(samples, spec.bins, (0.0, float(spec.scheme.partition_size)))


def auto_prefix_columns(n: int, trials: int, max_depth: int) -> int:
    """Largest k <= max_depth with 2^(n k) <= trials, so every prefix stratum is visited."""
    k = 0
    while k < max_depth and 2 ** (n * (k + 1)) <= trials:
        k += 1
    return k


def stratum_weights(trajectory_ids: Sequence[int], trials: int, strata: int) -> np.ndarray:
    """Post-stratification weights: each stratum i mod ``strata`` gets total
    weight 1/strata, split evenly among the trajectories that fall in it."""
    ids = np.asarray(trajectory_ids, dtype=np.int64)
    base, extra = divmod(trials, strata)
    counts = base + (ids % strata < extra)
    return 1.0 / (strata * counts)


def mean_entropy_curve(
    n: int,
    n_a: int,
    phi: float,
    trials: int,
    max_depth: int,
    seed: int,
    input_kind: str = "zeros",
    threads: int = 1,
    stratify: Union[str, int] = "auto",
) -> np.ndarray:
    """Trial-averaged entropy after t = 0 .. max_depth steps.

    Outcomes are uniform, so the exact mean is an average over all outcome
    sequences.  With ``stratify = k`` the first k columns are enumerated
    over all 2^(n k) prefixes (needs ``trials >= 2^(n k)``) and only later
    columns are sampled; depths up to k are then exact.  ``"auto"`` picks
    the largest feasible k, ``0`` gives plain Monte Carlo.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    k = auto_prefix_columns(n, trials, max_depth) if stratify == "auto" else int(stratify)
    strata = 2 ** (n * k)
    if k < 0 or strata > trials:
        raise ValueError(f"cannot stratify {k} columns of {n} rows with {trials} trials")

    def run(chunk: range) -> np.ndarray:
        _, ent = simulate_entropy_trace(n, n_a, phi, max_depth, seed, chunk, input_kind, prefix_columns=k)
        return ent @ stratum_weights(chunk, trials, strata)

    total = np.zeros(max_depth + 1)
    for s in _map_chunks(run, trials, threads):
        total += s
    return total


def first_sustained_depth(curve: Sequence[float], target: float, epsilon: float, window: int) -> Optional[int]:
    """Smallest t with |curve[t'] - target| < epsilon for all t' in [t, t + window - 1]."""
    dev = np.abs(np.asarray(curve, dtype=float) - target) < epsilon
    run = 0
    for t, ok in enumerate(dev):
        run = run + 1 if ok else 0
        if run >= window:
            return t - window + 1
    return None


def _page(n: int, n_a: int) -> float:
    return page_average(min(n_a, n - n_a), max(n_a, n - n_a))


def convergence_time(
    n: int,
    n_a: int,
    phi: float = DEFAULT_PHI,
    epsilon: Union[float, Sequence[float]] = 0.01,
    trials: int = 10_000,
    window: int = 10,
    max_depth: int = 200,
    seed: int = 0,
    input_kind: str = "zeros",
    threads: int = 1,
    stratify: Union[str, int] = "auto",
) -> Union[ConvergenceResult, list[ConvergenceResult]]:
    """Depth t_epsilon after which the mean entropy stays within epsilon of Page.

    A list of epsilons returns one result per epsilon, all evaluated on the
    same trial data.
    """
    if trials < 100:
        raise ValueError("convergence_time needs at least 100 trials")
    if window < 1 or max_depth < 0:
        raise ValueError("window must be positive and max_depth nonnegative")
    SchemeConfig(rows=n, phi=phi, partition_size=n_a, seed=seed)
    curve = mean_entropy_curve(n, n_a, phi, trials, max_depth, seed, input_kind, threads, stratify)
    target = _page(n, n_a)
    single = np.isscalar(epsilon)
    eps_list = [float(epsilon)] if single else [float(e) for e in epsilon]
    out = []
    for eps in eps_list:
        if not eps > 0:
            raise ValueError("epsilon must be positive")
        t = first_sustained_depth(curve, target, eps, window)
        out.append(ConvergenceResult(n, n_a, phi, eps, window, t, trials, max_depth))
    return out[0] if single else out


def phi_scan(
    n: int,
    n_a: int,
    phis: Iterable[float],
    depth: int,
    trials: int,
    seed: int = 0,
    input_kind: str = "zeros",
    threads: int = 1,
    stratify: Union[str, int] = "auto",
) -> list[PhiScanRow]:
    """Mean entropy at a fixed depth for each phi, against the Page value.

    Every phi sees the same outcome sequences and inputs.
    """
    target = _page(n, n_a)
    rows = []
    for phi in phis:
        SchemeConfig(rows=n, phi=phi, partition_size=n_a, seed=seed)
        curve = mean_entropy_curve(n, n_a, phi, trials, depth, seed, input_kind, threads, stratify)
        rows.append(PhiScanRow(phi, depth, trials, float(curve[-1]), abs(float(curve[-1]) - target)))
    return rows


# --- CSV output ---

def format_float(x: float) -> str:
    return format(float(x), ".12g")


def _rows_for(result) -> tuple[list[str], list[list]]:
    if isinstance(result, EntanglementHistogram):
        e = result.bin_edges
        return ["bin_lo", "bin_hi", "density"], [
            [format_float(e[i]), format_float(e[i + 1]), format_float(d)] for i, d in enumerate(result.densities)
        ]
    if isinstance(result, BurninResult):
        return ["step", "entropy_bits"], [[int(s), format_float(v)] for s, v in zip(result.steps, result.entropies)]
    if isinstance(result, StabilizerPmf):
        return ["s_a", "probability"], [[s, format_float(p)] for s, p in enumerate(result.probabilities)]
    if isinstance(result, ConvergenceResult):
        result = [result]
    if isinstance(result, PhiScanRow):
        result = [result]
    items = list(result)
    if items and all(isinstance(r, ConvergenceResult) for r in items):
        return ["n", "n_a", "phi", "epsilon", "window", "trials", "t_epsilon"], [
            [r.n, r.n_a, format_float(r.phi), format_float(r.epsilon), r.window, r.trajectories_used,
             -1 if r.t_epsilon is None else r.t_epsilon]
            for r in items
        ]
    if items and all(isinstance(r, PhiScanRow) for r in items):
        return ["phi", "depth", "trials", "mean_entropy", "abs_deviation_from_page"], [
            [format_float(r.phi), r.depth, r.trials, format_float(r.mean_entropy), format_float(r.abs_deviation_from_page)]
            for r in items
        ]
    raise TypeError(f"no CSV schema for {type(result).__name__}")


def to_csv(result) -> str:
    header, rows = _rows_for(result)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def emit_csv(result, destination: Union[str, os.PathLike, TextIO]) -> None:
    """Write ``result`` as CSV to a path or an open text stream.

    The text is rendered completely before anything is written.
    """
    emit_csv_text(to_csv(result), destination)


def emit_csv_text(text: str, destination: Union[str, os.PathLike, TextIO]) -> None:
    if hasattr(destination, "write"):
        destination.write(text)
        destination.flush()
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {os.fspath(destination)}: {exc.strerror or exc}") from exc
