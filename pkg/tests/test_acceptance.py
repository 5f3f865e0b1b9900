"""Acceptance criteria, one test each.

Every test appends a PASS/FAIL line to the summary printed at the end of
the pytest run, and also prints it (visible with ``-s``).
"""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from test_entanglement import _enumerate_stabilizer_states
from wgsrandom import experiments as exp
from wgsrandom.cli import main
from wgsrandom.entanglement import (
    batch_entropy_bits,
    distribution_distance,
    haar_batch,
    haar_sample,
    page_average,
    stabilizer_entropy_pmf,
    vn_entropy_bits,
)
from wgsrandom.scheme import (
    GeneralizedStep,
    SchemeConfig,
    column_step,
    generalized_m,
    input_rng,
    kraus_completeness_defect,
    mbqc_column_oracle,
    oracle_branch_probabilities,
    unitarity_defect,
)
from wgsrandom.statevec import H, Z, StateVector, fidelity

PHI = 5 * math.pi / 8
SQRT_HALF = 1 / math.sqrt(2)


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    worst_fid, worst_prob = 0.0, 0.0
    for n in (1, 2, 3):
        for trial in range(100):
            rng = input_rng(101, (n << 32) + trial)
            psi = haar_sample(n, rng)
            bits, got = mbqc_column_oracle(psi, PHI, rng)
            worst_fid = max(worst_fid, 1 - fidelity(got, column_step(psi, bits, PHI)))
            worst_prob = max(worst_prob, float(np.abs(oracle_branch_probabilities(psi, PHI) - 2.0**-n).max()))
    elapsed = time.perf_counter() - start
    ok = worst_fid <= 1e-10 and worst_prob <= 1e-10 and elapsed < 10
    report(1, "oracle equivalence", ok, f"max 1-F={worst_fid:.1e}, max |p-1/2^N|={worst_prob:.1e}, {elapsed:.1f}s")


def test_criterion_2_page_mean():
    start = time.perf_counter()
    devs = []
    for na in (1, 2, 3):
        cfg = SchemeConfig(rows=6, phi=PHI, partition_size=na, seed=1)
        mean = exp.burnin_mean_entropy(exp.ExperimentSpec(cfg, burnin_steps=10_000, sample_steps=10_000))
        devs.append(abs(mean - page_average(na, 6 - na)))
    elapsed = time.perf_counter() - start
    ok = max(devs) < 0.01 and elapsed < 120
    report(2, "Page mean at N=6", ok, "|mean-Page| = " + ", ".join(f"{d:.4f}" for d in devs) + f"; {elapsed:.1f}s")


def test_criterion_3_distribution_match():
    start = time.perf_counter()
    cfg = SchemeConfig(rows=6, phi=PHI, partition_size=3, seed=2)
    wgs = exp.entropy_samples(exp.ExperimentSpec(cfg, burnin_steps=10_000, sample_steps=10_000))
    haar = batch_entropy_bits(haar_batch(6, 10_000, np.random.default_rng(7)), 6, 3)
    d = distribution_distance(wgs, haar, bins=500, range=(0.0, 3.0))
    elapsed = time.perf_counter() - start
    ok = d.ks <= 0.03 and elapsed < 120
    report(3, "entropy distribution vs Haar at N=6", ok, f"KS={d.ks:.4f}, TV={d.tv:.3f}, {elapsed:.1f}s")


def test_criterion_4_convergence_scaling():
    start = time.perf_counter()
    ns = [2, 3, 4, 5, 6]
    ts = []
    for n in ns:
        trials = 2**20 if n <= 4 else 10**5
        r = exp.convergence_time(n, 1, PHI, 0.01, trials=trials, window=10, max_depth=40, seed=0)
        ts.append(r.t_epsilon)
    elapsed = time.perf_counter() - start
    finite = all(t is not None for t in ts)
    nondecreasing = finite and all(b >= a for a, b in zip(ts, ts[1:]))
    corr = float(np.corrcoef(ns, ts)[0, 1]) if finite else float("nan")
    ok = finite and nondecreasing and corr >= 0.9 and elapsed < 600
    report(4, "t_eps linear in N", ok, f"t_0.01={ts}, r={corr:.3f}, {elapsed:.1f}s")


def test_criterion_5_analytic_checks():
    closed = abs(page_average(1, 1) - 1 / (3 * math.log(2)))
    x = batch_entropy_bits(haar_batch(2, 10**5, np.random.default_rng(11)), 2, 1)
    z = abs(x.mean() - page_average(1, 1)) / (x.std(ddof=1) / math.sqrt(x.size))
    pmf = stabilizer_entropy_pmf(2, 1)
    states = _enumerate_stabilizer_states(2)
    ent = np.array([round(vn_entropy_bits(StateVector(s), 1)) for s in states])
    brute = np.array([np.mean(ent == 0), np.mean(ent == 1)])
    sums = max(abs(stabilizer_entropy_pmf(n, na).sum() - 1) for n in range(2, 13) for na in range(1, n // 2 + 1))
    ok = (
        closed <= 1e-9
        and z < 3
        and np.abs(pmf - [0.6, 0.4]).max() <= 1e-12
        and len(states) == 60
        and np.abs(brute - pmf).max() <= 1e-12
        and sums <= 1e-9
    )
    report(5, "analytic cross-checks", ok, f"Page closed form {closed:.1e}, MC z={z:.2f}, {len(states)} stabilizer states, pmf sum err {sums:.1e}")


def test_criterion_6_degenerate_phi():
    rng = np.random.default_rng(5)
    worst_zero = 0.0
    for n in range(2, 7):
        for kind in ("zeros", "plus"):
            for na in range(1, n):
                _, e = exp.simulate_entropy_trace(n, na, 2 * math.pi, 100, 3, range(8), kind)
                worst_zero = max(worst_zero, float(e.max()))
        # random product input through the reference column step
        amps = np.ones(1)
        for _ in range(n):
            q = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            amps = np.kron(q / np.linalg.norm(q), amps)
        state = StateVector(amps)
        for t in range(100):
            state = column_step(state, rng.integers(0, 2, n), 2 * math.pi)
            worst_zero = max(worst_zero, max(vn_entropy_bits(state, na) for na in range(1, n)))
    worst_int = 0.0
    for n in range(2, 7):
        for na in range(1, n):
            _, e = exp.simulate_entropy_trace(n, na, math.pi, 100, 3, range(16), "plus")
            worst_int = max(worst_int, float(np.abs(e - np.round(e)).max()))
    ok = worst_zero <= 1e-10 and worst_int <= 1e-9
    report(6, "degenerate phi = pi, 2pi", ok, f"max S at 2pi={worst_zero:.1e}, max non-integrality at pi={worst_int:.1e}")


def _random_step(rng):
    z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q, r = np.linalg.qr(z)
    u = q * (np.diag(r) / np.abs(np.diag(r)))
    amp = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    amp /= np.linalg.norm(amp)
    return GeneralizedStep(amp[0], amp[1], float(rng.uniform(0, 2 * math.pi)), u)


def test_criterion_7_generalized_step():
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    cz_defect = unitarity_defect(GeneralizedStep(SQRT_HALF, SQRT_HALF, 0.0, cz))
    phi_gate = np.diag([1, 1, 1, np.exp(-1j * PHI)])
    phi_defect = unitarity_defect(GeneralizedStep(SQRT_HALF, SQRT_HALF, 0.0, phi_gate))
    expected = abs(0.5 * (1 + np.exp(-1j * PHI)))
    # branch operators of the CZ case equal H Z^s; the 1/sqrt(2) of the
    # measurement bra is not part of the branch formulas
    step = GeneralizedStep(SQRT_HALF, SQRT_HALF, 0.0, cz)
    branch_err = max(np.abs(generalized_m(step, s) - H @ np.linalg.matrix_power(Z, s)).max() for s in (0, 1))
    rng = np.random.default_rng(9)
    kraus = max(kraus_completeness_defect(_random_step(rng)) for _ in range(1000))
    ok = cz_defect <= 1e-12 and abs(phi_defect - expected) <= 1e-12 and phi_defect > 0.1 and branch_err <= 1e-12 and kraus <= 1e-10
    report(7, "generalized step checks", ok, f"CZ defect={cz_defect:.1e}, phi-gate defect={phi_defect:.4f}, H/HZ err={branch_err:.1e}, Kraus err={kraus:.1e}")


COMMANDS = [
    ["run", "--n", "5", "--na", "2", "--length", "200", "--seed", "4"],
    ["burnin", "--n", "5", "--na", "2", "--burnin", "500", "--samples", "500", "--seed", "4"],
    ["histogram", "--n", "5", "--na", "2", "--burnin", "500", "--samples", "2000", "--seed", "4"],
    ["histogram", "--n", "4", "--na", "2", "--burnin", "60", "--trials", "9000", "--mode", "independent", "--seed", "4"],
    ["converge", "--n", "2", "3", "4", "--trials", "9000", "--max-depth", "30", "--epsilon", "0.01", "0.05", "--seed", "4"],
    ["phiscan", "--n", "4", "--na", "2", "--length", "20", "--trials", "9000", "--seed", "4"],
]


def test_criterion_8_determinism(tmp_path):
    mismatched = []
    for i, argv in enumerate(COMMANDS):
        outputs = []
        for threads in ("1", "1", "8", "8"):
            path = tmp_path / f"{i}_{len(outputs)}.csv"
            assert main(argv + ["--threads", threads, "--out", str(path)]) == 0
            outputs.append(path.read_bytes())
        if len(set(outputs)) != 1:
            mismatched.append(argv[0])
    ok = not mismatched
    report(8, "byte-identical CSV at 1 and 8 threads", ok, f"{len(COMMANDS)} commands, mismatches: {mismatched or 'none'}")
