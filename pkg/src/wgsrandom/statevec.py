"""Dense state vectors over qubits.

Amplitudes are stored little-endian: qubit ``j`` is bit ``j`` of the
basis-state index, so qubit 0 is the least significant bit.  Every
operation returns a new :class:`StateVector`; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "StateVector",
    "NumericalError",
    "H",
    "X",
    "Z",
    "I2",
    "zero_state",
    "plus_state",
    "basis_state",
    "apply_single_qubit",
    "apply_controlled_phase",
    "x_basis_probability",
    "measure_x_basis",
    "reduced_spectrum",
    "overlap",
    "fidelity",
]

MAX_QUBITS = 24
NORM_ATOL = 1e-10
UNITARY_ATOL = 1e-8
CLAMP_ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class NumericalError(RuntimeError):
    """Raised when roundoff exceeds what the kernels are allowed to absorb."""


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``num_qubits`` qubits.

    The amplitude array is copied and made read-only on construction.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        dim = amps.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"amplitude vector length {dim} is not 2**n with n >= 1")
        if dim > 2**MAX_QUBITS:
            raise ValueError(f"more than {MAX_QUBITS} qubits is outside the dense envelope")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = True) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm < 1e-15:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def _unchecked(amps: np.ndarray) -> StateVector:
    # Kernel outputs are unitary images of normalized input; renormalize away
    # the last ulp so the 1e-12 norm invariant holds through long circuits.
    amps = amps / np.linalg.norm(amps)
    return StateVector(amps)


def zero_state(n: int) -> StateVector:
    return basis_state(n, 0)


def basis_state(n: int, index: int) -> StateVector:
    if n < 1:
        raise ValueError("need at least one qubit")
    if not 0 <= index < 2**n:
        raise ValueError(f"basis index {index} out of range for {n} qubits")
    amps = np.zeros(2**n, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps)


def plus_state(n: int) -> StateVector:
    if n < 1:
        raise ValueError("need at least one qubit")
    return StateVector(np.full(2**n, 2 ** (-n / 2), dtype=complex))


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise ValueError(f"qubit {qubit} out of range for {state.num_qubits} qubits")


def _as_tensor(amps: np.ndarray, n: int) -> np.ndarray:
    # axis 0 is the most significant bit, so qubit q lives on axis n - 1 - q
    return amps.reshape((2,) * n)


def apply_single_qubit(state: StateVector, qubit: int, gate) -> StateVector:
    """Apply a 2x2 unitary to one qubit."""
    _check_qubit(state, qubit)
    gate = np.asarray(gate, dtype=complex)
    if gate.shape != (2, 2):
        raise ValueError(f"single-qubit gate must be 2x2, got {gate.shape}")
    if np.abs(gate.conj().T @ gate - I2).max() > UNITARY_ATOL:
        raise ValueError("gate is not unitary")
    n = state.num_qubits
    axis = n - 1 - qubit
    psi = _as_tensor(state.amplitudes, n)
    out = np.tensordot(gate, psi, axes=([1], [axis]))
    out = np.moveaxis(out, 0, axis)
    return _unchecked(out.reshape(-1))


def _both_set_mask(n: int, a: int, b: int) -> np.ndarray:
    idx = np.arange(2**n)
    return ((idx >> a) & 1).astype(bool) & ((idx >> b) & 1).astype(bool)


def apply_controlled_phase(state: StateVector, qubit_a: int, qubit_b: int, phi: float) -> StateVector:
    """Apply diag(1, 1, 1, exp(-i phi)) to a qubit pair.

    ``phi = pi`` is CZ and ``phi = 2 pi`` is the identity.
    """
    _check_qubit(state, qubit_a)
    _check_qubit(state, qubit_b)
    if qubit_a == qubit_b:
        raise ValueError("controlled phase needs two distinct qubits")
    mask = _both_set_mask(state.num_qubits, qubit_a, qubit_b)
    out = state.amplitudes.copy()
    out[mask] *= np.exp(-1j * phi)
    return _unchecked(out)


def _x_projection(state: StateVector, qubit: int, outcome: int) -> np.ndarray:
    """Unnormalized (|s><s| on ``qubit``) state, |s> = |+> for 0 and |-> for 1."""
    n = state.num_qubits
    axis = n - 1 - qubit
    psi = _as_tensor(state.amplitudes, n)
    sign = 1.0 if outcome == 0 else -1.0
    bra = np.array([1.0, sign]) / np.sqrt(2)
    reduced = np.tensordot(bra, psi, axes=([0], [axis]))
    # re-expand with the measured qubit in |+> or |->
    out = np.multiply.outer(bra, reduced)
    return np.moveaxis(out, 0, axis).reshape(-1)


def x_basis_probability(state: StateVector, qubit: int) -> float:
    """Born probability of the +1 eigenvalue (outcome 0) of X on ``qubit``."""
    _check_qubit(state, qubit)
    p = np.vdot(proj := _x_projection(state, qubit, 0), proj).real
    return float(min(max(p, 0.0), 1.0))


def measure_x_basis(state: StateVector, qubit: int, random_draw: float) -> tuple[int, StateVector]:
    """Projective X measurement driven by an external uniform draw.

    Outcome 0 (eigenvalue +1, post-state |+>) is chosen iff
    ``random_draw < p_plus``.
    """
    _check_qubit(state, qubit)
    if not 0.0 <= random_draw < 1.0:
        raise ValueError(f"random_draw must lie in [0, 1), got {random_draw}")
    p_plus = x_basis_probability(state, qubit)
    outcome = 0 if random_draw < p_plus else 1
    projected = _x_projection(state, qubit, outcome)
    norm = np.linalg.norm(projected)
    if norm < 1e-15:
        raise NumericalError("selected measurement branch has vanishing norm")
    return outcome, StateVector(projected / norm)


def _bipartite_matrix(amps: np.ndarray, n: int, subset: Sequence[int]) -> np.ndarray:
    rest = [q for q in range(n) if q not in subset]
    # tensor axes listed as qubits, most significant first within each group
    axes = [n - 1 - q for q in sorted(subset, reverse=True)]
    axes += [n - 1 - q for q in sorted(rest, reverse=True)]
    psi = np.transpose(_as_tensor(amps, n), axes)
    return psi.reshape(2 ** len(subset), 2 ** len(rest))


def _clamp_spectrum(evals: np.ndarray) -> np.ndarray:
    if evals.min() < -CLAMP_ATOL:
        raise NumericalError(f"reduced density matrix eigenvalue {evals.min():.3e} is negative")
    return np.clip(evals, 0.0, 1.0)


def reduced_spectrum(state: StateVector, subset: Iterable[int]) -> np.ndarray:
    """Eigenvalues of the reduced density matrix on ``subset``, nonincreasing.

    The result has length ``2**len(subset)``.  It is computed on the smaller
    side of the cut and zero-padded, so a subset and its complement give the
    same nonzero spectrum.
    """
    n = state.num_qubits
    subset = sorted(set(int(q) for q in subset))
    if not subset or len(subset) >= n:
        raise ValueError("subset must be a nonempty proper subset of the qubits")
    for q in subset:
        _check_qubit(state, q)
    m = _bipartite_matrix(state.amplitudes, n, subset)
    small = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    evals = _clamp_spectrum(np.linalg.eigvalsh(small))[::-1]
    out = np.zeros(m.shape[0])
    out[: evals.shape[0]] = evals
    if abs(out.sum() - 1.0) > 1e-10:
        raise NumericalError(f"reduced spectrum sums to {out.sum()!r}")
    return out


def overlap(a: StateVector, b: StateVector) -> complex:
    if a.dim != b.dim:
        raise ValueError("states live in different Hilbert spaces")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|, insensitive to global phase."""
    return abs(overlap(a, b))
