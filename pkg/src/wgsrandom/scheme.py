"""Random circuits from fixed X-basis measurements on a weighted graph state.

The resource is an N x l grid of qubits prepared in |+>.  Horizontally
adjacent qubits (neighbouring columns) are joined by CZ, vertically adjacent
qubits (neighbouring rows, open chain) by the phi-gate diag(1, 1, 1, e^{-i phi}).
Measuring a column with outcome bits S moves the row state one column to the
right through the unitary

    G(phi) . M(S),   M(S) = (x)_j H Z^{S_j},   G(phi) = prod_j U_phi(j, j+1).

Rows are numbered from 0 here and row j is qubit j of the state vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .statevec import (
    H,
    Z,
    StateVector,
    apply_controlled_phase,
    apply_single_qubit,
    basis_state,
    measure_x_basis,
    x_basis_probability,
)

__all__ = [
    "DEFAULT_PHI",
    "SchemeConfig",
    "GeneralizedStep",
    "OutcomeStream",
    "outcome_bits",
    "input_rng",
    "trajectory_streams",
    "sample_outcome",
    "apply_m_operator",
    "apply_g_operator",
    "column_step",
    "run_circuit",
    "two_qubit_gate_count",
    "column_unitary",
    "eigenphase_survey",
    "mbqc_column_oracle",
    "oracle_branch_probabilities",
    "generalized_m",
    "unitarity_defect",
    "kraus_completeness_defect",
]

DEFAULT_PHI = 5 * math.pi / 8
TWO_PI = 2 * math.pi


def _check_phi(phi: float) -> None:
    if not 0.0 < phi <= TWO_PI + 1e-12:
        raise ValueError(f"phi must lie in (0, 2pi], got {phi!r}")


@dataclass(frozen=True)
class SchemeConfig:
    """Lattice size and experiment parameters.

    ``rows`` is the number of input qubits N, ``length`` the number of
    applied column steps, ``partition_size`` the number of rows N_A in
    subsystem A (rows 0 .. N_A - 1).
    """

    rows: int
    length: int = 0
    phi: float = DEFAULT_PHI
    partition_size: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.rows < 1:
            raise ValueError("rows must be positive")
        if self.length < 0:
            raise ValueError("length must be nonnegative")
        _check_phi(self.phi)
        if self.rows > 1 and not 1 <= self.partition_size <= self.rows - 1:
            raise ValueError(f"partition_size must lie in [1, {self.rows - 1}]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def complement_size(self) -> int:
        return self.rows - self.partition_size


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _trajectory_keys(seed: int, trajectory_ids) -> np.ndarray:
    ids = np.asarray(trajectory_ids, dtype=np.uint64)
    root = _mix64(np.array([seed], dtype=np.uint64))[0]
    return _mix64(root ^ _mix64(ids * _GOLDEN + _GOLDEN))


def outcome_bits(seed: int, trajectory_ids, first_column: int, columns: int, rows: int) -> np.ndarray:
    """Outcome bits, shape (len(trajectory_ids), columns, rows).

    Counter-based: the bit of row j in column c of trajectory i is the top
    bit of SplitMix64 output number c*rows + j of a stream keyed by
    (seed, i), so any column can be produced without replaying earlier ones.
    """
    keys = _trajectory_keys(seed, np.atleast_1d(trajectory_ids))
    k = np.arange(first_column * rows, (first_column + columns) * rows, dtype=np.uint64)
    z = _mix64(keys[:, None] + (k[None, :] + np.uint64(1)) * _GOLDEN)
    return (z >> np.uint64(63)).astype(np.uint8).reshape(keys.shape[0], columns, rows)


class OutcomeStream:
    """Measurement-outcome source for one trajectory, with a column cursor."""

    def __init__(self, seed: int, trajectory_id: int = 0, column: int = 0):
        if not 0 <= seed < 2**64 or not 0 <= trajectory_id < 2**64:
            raise ValueError("seed and trajectory_id must be 64-bit unsigned integers")
        self.seed = seed
        self.trajectory_id = trajectory_id
        self.column = column

    def take(self, columns: int, rows: int) -> np.ndarray:
        """Bits for the next ``columns`` columns, shape (columns, rows)."""
        bits = outcome_bits(self.seed, [self.trajectory_id], self.column, columns, rows)[0]
        self.column += columns
        return bits


def input_rng(seed: int, trajectory_id: int) -> np.random.Generator:
    """Generator for a trajectory's random input state, keyed by
    ``SeedSequence(seed, spawn_key=(trajectory_id,))``."""
    ss = np.random.SeedSequence(seed, spawn_key=(trajectory_id,))
    return np.random.Generator(np.random.PCG64(ss))


def trajectory_streams(seed: int, trajectory_id: int) -> tuple[np.random.Generator, OutcomeStream]:
    """(input-state generator, outcome stream) for one trajectory.

    The two are independent, and neither depends on how many other
    trajectories a run contains.
    """
    return input_rng(seed, trajectory_id), OutcomeStream(seed, trajectory_id)


def sample_outcome(config: SchemeConfig, stream: OutcomeStream) -> np.ndarray:
    """Outcome bits for the stream's next column.

    All 2N branch operators are unitary with Kraus weight 1/2, so outcomes
    are independent fair coins and need not be drawn from the joint state.
    """
    return stream.take(1, config.rows)[0]


def _check_outcome(state: StateVector, outcome) -> np.ndarray:
    bits = np.asarray(outcome, dtype=np.int64).reshape(-1)
    if bits.shape[0] != state.num_qubits:
        raise ValueError(f"outcome has {bits.shape[0]} bits for a {state.num_qubits}-row state")
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("outcome bits must be 0 or 1")
    return bits


def apply_m_operator(state: StateVector, outcome) -> StateVector:
    """Apply H Z^{S_j} to every row j."""
    bits = _check_outcome(state, outcome)
    hz = H @ Z
    for j, s in enumerate(bits):
        state = apply_single_qubit(state, j, hz if s else H)
    return state


def apply_g_operator(state: StateVector, phi: float) -> StateVector:
    """Apply the phi-gate to each vertically adjacent row pair (j, j+1)."""
    for j in range(state.num_qubits - 1):
        state = apply_controlled_phase(state, j, j + 1, phi)
    return state


def column_step(state: StateVector, outcome, phi: float) -> StateVector:
    """One column transfer: G(phi) M(S) |state>."""
    return apply_g_operator(apply_m_operator(state, outcome), phi)


def run_circuit(
    state: StateVector, config: SchemeConfig, stream: OutcomeStream | None = None
) -> tuple[StateVector, list[np.ndarray]]:
    """Apply ``config.length`` column steps with freshly sampled outcomes.

    ``stream`` defaults to trajectory 0 of ``config.seed``.  Returns the
    output state and the list of outcome vectors, one per step.
    """
    if state.num_qubits != config.rows:
        raise ValueError(f"state has {state.num_qubits} qubits, config has {config.rows} rows")
    if stream is None:
        stream = OutcomeStream(config.seed, 0)
    log = list(stream.take(config.length, config.rows))
    for bits in log:
        state = column_step(state, bits, config.phi)
    return state, log


def two_qubit_gate_count(config: SchemeConfig) -> int:
    """Resource two-qubit gates consumed: N CZ plus N-1 phi-gates per column."""
    return (2 * config.rows - 1) * config.length


def column_unitary(rows: int, outcome, phi: float) -> np.ndarray:
    """Dense 2^N x 2^N matrix of G(phi) M(S), built column by column."""
    dim = 2**rows
    cols = [column_step(basis_state(rows, k), outcome, phi).amplitudes for k in range(dim)]
    return np.stack(cols, axis=1)


def eigenphase_survey(rows: int, phi: float = math.pi) -> dict[tuple[int, ...], np.ndarray]:
    """Sorted eigenphases (radians, in (-pi, pi]) of G(phi) M(S) for every outcome S."""
    out = {}
    for code in range(2**rows):
        bits = tuple((code >> j) & 1 for j in range(rows))
        phases = np.angle(np.linalg.eigvals(column_unitary(rows, bits, phi)))
        out[bits] = np.sort(phases)
    return out


# --- literal measurement-based simulation, used to validate the shortcut ---

def _embed_input_with_plus_column(state: StateVector) -> StateVector:
    # input rows are qubits 0..N-1, resource column qubits N..2N-1
    n = state.num_qubits
    plus = np.full(2**n, 2 ** (-n / 2))
    return StateVector(np.kron(plus, state.amplitudes))


def _entangle(joint: StateVector, n: int, phi: float) -> StateVector:
    for j in range(n - 1):
        joint = apply_controlled_phase(joint, n + j, n + j + 1, phi)
    for j in range(n):
        joint = apply_controlled_phase(joint, j, n + j, math.pi)
    return joint


def _discard_measured(joint: StateVector, n: int, bits) -> StateVector:
    # contract the measured input qubits against their |+>/|-> states
    dim = 2**n
    idx = np.arange(dim)
    code = sum(int(b) << j for j, b in enumerate(bits))
    parity = np.array([bin(code & x).count("1") & 1 for x in idx])
    bra = np.where(parity, -1.0, 1.0) / math.sqrt(dim)
    resource = joint.amplitudes.reshape(dim, dim) @ bra
    return StateVector.from_amplitudes(resource)


def mbqc_column_oracle(
    state: StateVector, phi: float, rng: np.random.Generator
) -> tuple[np.ndarray, StateVector]:
    """Simulate one column of the scheme on the full 2N-qubit system.

    Prepares a resource column in |+>, applies the phi-gates along it and CZ
    from each input row to its resource qubit, then X-measures the input
    rows one after another with Born-rule sampling.  Returns the outcome
    bits and the resource column state.
    """
    n = state.num_qubits
    if 2 * n > 16:
        raise ValueError("the literal oracle is limited to 2N <= 16 qubits")
    _check_phi(phi)
    joint = _entangle(_embed_input_with_plus_column(state), n, phi)
    bits = np.zeros(n, dtype=np.uint8)
    for j in range(n):
        bits[j], joint = measure_x_basis(joint, j, float(rng.random()))
    return bits, _discard_measured(joint, n, bits)


def oracle_branch_probabilities(state: StateVector, phi: float) -> np.ndarray:
    """Exact joint outcome distribution of the literal oracle, indexed by
    the outcome code sum_j S_j 2^j.

    Built from sequential conditional Born probabilities, so entry ``code``
    is the product of p(S_j | S_0..S_{j-1}) along that branch.
    """
    n = state.num_qubits
    joint = _entangle(_embed_input_with_plus_column(state), n, phi)
    probs = np.zeros(2**n)

    def descend(st: StateVector, j: int, code: int, p: float) -> None:
        if j == n:
            probs[code] = p
            return
        p_plus = x_basis_probability(st, j)
        for s, ps in ((0, p_plus), (1, 1.0 - p_plus)):
            if ps < 1e-15:
                continue
            # draw 0 selects outcome 0 whenever p_plus > 0; just below 1 selects 1
            draw = 0.0 if s == 0 else np.nextafter(1.0, 0.0)
            _, nxt = measure_x_basis(st, j, draw)
            descend(nxt, j + 1, code | (s << j), p * ps)

    descend(joint, 0, 0, 1.0)
    return probs


# --- generalized resource qubits, measurement angles and column couplings ---

@dataclass(frozen=True, eq=False)
class GeneralizedStep:
    """Resource qubit gamma|0> + delta|1>, measurement basis
    (|0> +- e^{i theta}|1>)/sqrt(2) and a 4x4 column coupling U.

    U is indexed in the (a, b) basis |00>, |01>, |10>, |11> with a the
    measured qubit as the more significant bit, matching the entry labels
    u_11 .. u_44 of the branch-operator formulas.
    """

    gamma: complex
    delta: complex
    theta: float
    column_unitary: np.ndarray

    def __post_init__(self):
        u = np.array(self.column_unitary, dtype=complex)
        if u.shape != (4, 4):
            raise ValueError("column_unitary must be 4x4")
        if np.abs(u.conj().T @ u - np.eye(4)).max() > 1e-10:
            raise ValueError("column_unitary is not unitary")
        if abs(abs(self.gamma) ** 2 + abs(self.delta) ** 2 - 1.0) > 1e-12:
            raise ValueError("|gamma|^2 + |delta|^2 must equal 1")
        u.setflags(write=False)
        object.__setattr__(self, "column_unitary", u)


def generalized_m(step: GeneralizedStep, s: int) -> np.ndarray:
    """2x2 branch operator for measurement outcome ``s``."""
    if s not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    u = step.column_unitary
    g, d = step.gamma, step.delta
    c = (-1) ** s * np.exp(-1j * step.theta)

    def entry(r, k):
        # u is 0-indexed here; r, k are the 1-indexed rows/cols of the formulas
        return g * (u[r - 1, k - 1] + c * u[r + 1, k - 1]) + d * (u[r - 1, k] + c * u[r + 1, k])

    return np.array([[entry(1, 1), entry(1, 3)], [entry(2, 1), entry(2, 3)]], dtype=complex)


def kraus_completeness_defect(step: GeneralizedStep) -> float:
    """max |M(0)^dag M(0) + M(1)^dag M(1) - 2 I|."""
    m0, m1 = generalized_m(step, 0), generalized_m(step, 1)
    total = m0.conj().T @ m0 + m1.conj().T @ m1
    return float(np.abs(total - 2 * np.eye(2)).max())


def unitarity_defect(step: GeneralizedStep) -> float:
    """How far the branch operators are from being proportional to unitaries.

    For diagonal U this is |gamma|^2 conj(u_11) u_33 + |delta|^2 conj(u_22) u_44
    in modulus.  Otherwise the largest spectral-norm deviation of
    M(s)^dag M(s) from the identity over both outcomes (the branch operators
    satisfy M(0)^dag M(0) + M(1)^dag M(1) = 2 I).
    """
    u = step.column_unitary
    if np.abs(u - np.diag(np.diag(u))).max() <= 1e-12:
        val = abs(step.gamma) ** 2 * np.conj(u[0, 0]) * u[2, 2]
        val += abs(step.delta) ** 2 * np.conj(u[1, 1]) * u[3, 3]
        return float(abs(val))
    return max(
        float(np.linalg.norm(m.conj().T @ m - np.eye(2), 2))
        for m in (generalized_m(step, 0), generalized_m(step, 1))
    )
