import math
from collections import Counter, deque
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kron_all, random_state
from wgsrandom.entanglement import (
    DistributionDistance,
    EntanglementHistogram,
    _stabilizer_pmf_exact,
    batch_entropy_bits,
    build_histogram,
    distribution_distance,
    entropy_from_spectrum,
    haar_batch,
    haar_sample,
    page_average,
    stabilizer_entropy_pmf,
    vn_entropy_bits,
)
from wgsrandom.statevec import H, I2, StateVector, plus_state, zero_state

S_GATE = np.diag([1, 1j])


def _bell():
    return StateVector.from_amplitudes([1, 0, 0, 1])


def test_entropy_examples():
    assert vn_entropy_bits(_bell(), 1) == pytest.approx(1.0, abs=1e-12)
    assert vn_entropy_bits(zero_state(3), 1) == 0.0
    assert vn_entropy_bits(plus_state(4), 2) == pytest.approx(0.0, abs=1e-12)
    w = StateVector.from_amplitudes([0, 1, 1, 0, 1, 0, 0, 0])
    h = -(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3)
    assert vn_entropy_bits(w, 1) == pytest.approx(h, abs=1e-12)


def test_entropy_rejects_bad_cut():
    with pytest.raises(ValueError):
        vn_entropy_bits(zero_state(2), 0)
    with pytest.raises(ValueError):
        vn_entropy_bits(zero_state(2), 2)
    with pytest.raises(ValueError):
        batch_entropy_bits(np.ones((1, 4)) / 2, 2, 2)


def test_entropy_from_spectrum_zero_terms():
    assert entropy_from_spectrum([1.0, 0.0, 0.0]) == 0.0
    assert entropy_from_spectrum([0.25] * 4) == pytest.approx(2.0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_batch_matches_single(rng, n):
    states = [random_state(n, rng) for _ in range(6)]
    amps = np.stack([s.amplitudes for s in states])
    for na in range(1, n):
        got = batch_entropy_bits(amps, n, na)
        want = [vn_entropy_bits(s, na) for s in states]
        np.testing.assert_allclose(got, want, atol=1e-10)


def test_page_examples():
    assert page_average(1, 1) == pytest.approx(1 / (3 * math.log(2)), abs=1e-12)
    assert page_average(1, 1) == pytest.approx(0.480898346963, abs=1e-12)
    with pytest.raises(ValueError):
        page_average(2, 1)
    with pytest.raises(ValueError):
        page_average(0, 3)


def test_page_matches_monte_carlo(rng):
    for na, nb in [(1, 2), (2, 2)]:
        x = batch_entropy_bits(haar_batch(na + nb, 20000, rng), na + nb, na)
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - page_average(na, nb)) < 4 * se


def test_page_bounds_and_monotone():
    for na in range(1, 9):
        for nb in range(na, 9):
            assert page_average(na, nb) < na
    for n in range(2, 17):
        vals = [page_average(na, n - na) for na in range(1, n // 2 + 1)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_haar_sample_normalized(rng):
    s = haar_sample(3, rng)
    assert s.num_qubits == 3
    assert abs(s.norm() - 1) < 1e-12
    with pytest.raises(ValueError):
        haar_sample(0, rng)


# --- stabilizer distribution ---

def test_stabilizer_pmf_two_qubits():
    assert _stabilizer_pmf_exact(2, 1) == [Fraction(3, 5), Fraction(2, 5)]
    np.testing.assert_allclose(stabilizer_entropy_pmf(2, 1), [0.6, 0.4], atol=1e-12)


def _canonical(vec):
    k = int(np.flatnonzero(np.abs(vec) > 1e-9)[0])
    v = vec * abs(vec[k]) / vec[k]
    return tuple(np.round(v, 8).tolist())


def _enumerate_stabilizer_states(n):
    gens = []
    for q in range(n):
        gens.append(kron_all([H if j == q else I2 for j in range(n)]))
        gens.append(kron_all([S_GATE if j == q else I2 for j in range(n)]))
    dim = 2**n
    for c in range(n):
        for t in range(n):
            if c != t:
                cx = np.zeros((dim, dim))
                for i in range(dim):
                    cx[i ^ ((i >> c) & 1) << t, i] = 1
                gens.append(cx)
    start = np.zeros(dim, dtype=complex)
    start[0] = 1
    seen = {_canonical(start): start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for g in gens:
            w = g @ v
            key = _canonical(w)
            if key not in seen:
                seen[key] = w
                queue.append(w)
    return list(seen.values())


@pytest.mark.parametrize("n, count", [(2, 60), (3, 1080)])
def test_stabilizer_pmf_matches_enumeration(n, count):
    states = _enumerate_stabilizer_states(n)
    assert len(states) == count
    ent = Counter(round(vn_entropy_bits(StateVector(s), 1)) for s in states)
    if n == 2:
        assert ent == {0: 36, 1: 24}
    freq = [Fraction(ent[s], count) for s in range(2)]
    assert _stabilizer_pmf_exact(n, 1) == freq


def test_stabilizer_pmf_sums_to_one():
    for n in range(2, 13):
        for na in range(1, n // 2 + 1):
            p = stabilizer_entropy_pmf(n, na)
            assert sum(_stabilizer_pmf_exact(n, na)) == 1
            assert abs(p.sum() - 1) < 1e-9
            assert np.all(p >= 0)


def test_stabilizer_pmf_rejects_bad_cut():
    with pytest.raises(ValueError):
        stabilizer_entropy_pmf(3, 2)


# --- histograms and distances ---

def test_histogram_normalized(rng):
    x = rng.random(1000) * 2
    h = build_histogram(x, 50, (0, 2))
    assert isinstance(h, EntanglementHistogram)
    assert h.probabilities.sum() == pytest.approx(1)
    assert h.sample_count == 1000 and h.overflow == 0
    assert h.range == (0.0, 2.0)


def test_histogram_counts_overflow():
    h = build_histogram([-0.1, 0.5, 1.2], 4, (0, 1))
    assert h.overflow == 2
    assert h.probabilities.sum() == pytest.approx(1)


def test_histogram_errors():
    with pytest.raises(ValueError):
        build_histogram([], 4, (0, 1))
    with pytest.raises(ValueError):
        build_histogram([0.5], 0, (0, 1))
    with pytest.raises(ValueError):
        build_histogram([0.5], 4, (1, 1))


def test_distance_identical_and_disjoint():
    a = np.linspace(0, 1, 101)
    assert distribution_distance(a, a) == DistributionDistance(0.0, 0.0)
    d = distribution_distance([0.1, 0.2], [0.8, 0.9], bins=10, range=(0, 1))
    assert d.ks == 1.0 and d.tv == 1.0


def test_distance_on_histograms(rng):
    x, y = rng.random(500), rng.random(500) ** 2
    hx, hy = build_histogram(x, 20, (0, 1)), build_histogram(y, 20, (0, 1))
    d = distribution_distance(hx, hy)
    raw = distribution_distance(x, y, bins=20, range=(0, 1))
    assert d.tv == pytest.approx(raw.tv)
    assert abs(d.ks - raw.ks) < 0.1
    assert distribution_distance(hx, y).tv == pytest.approx(d.tv)
    with pytest.raises(ValueError):
        distribution_distance(hx, build_histogram(y, 10, (0, 1)))


def test_distance_range_errors():
    with pytest.raises(ValueError):
        distribution_distance([0.5, 2.0], [0.5], range=(0, 1))
    with pytest.raises(ValueError):
        distribution_distance([], [0.5])


# --- properties ---

@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5))
def test_local_unitary_invariance(seed, n):
    rng = np.random.default_rng(seed)
    psi = random_state(n, rng)
    na = int(rng.integers(1, n))
    ops = []
    for _ in range(n):
        z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        ops.append(np.linalg.qr(z)[0])
    moved = StateVector.from_amplitudes(kron_all(ops) @ psi.amplitudes)
    assert abs(vn_entropy_bits(moved, na) - vn_entropy_bits(psi, na)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6))
def test_entropy_bounds(seed, n):
    rng = np.random.default_rng(seed)
    na = int(rng.integers(1, n))
    x = batch_entropy_bits(haar_batch(n, 8, rng), n, na)
    assert np.all(x >= 0) and np.all(x <= min(na, n - na) + 1e-12)
