# One column of the lattice, two ways.
#
# The literal picture: N input qubits, a fresh column of |+> resource qubits
# joined vertically by phi-gates, CZ bonds across, then X measurements on the
# inputs.  The shortcut: apply G(phi) M(S) to the input directly.
# Both should land on the same state, and every outcome pattern should be
# equally likely whatever the input.

import math

import numpy as np

from wgsrandom import column_step, haar_sample, mbqc_column_oracle
from wgsrandom.scheme import column_unitary, oracle_branch_probabilities
from wgsrandom.statevec import fidelity

phi = 5 * math.pi / 8
rng = np.random.default_rng(1)

for n in (1, 2, 3):
    psi = haar_sample(n, rng)
    bits, literal = mbqc_column_oracle(psi, phi, rng)
    shortcut = column_step(psi, bits, phi)
    probs = oracle_branch_probabilities(psi, phi)
    print(f"N={n} outcome={bits.tolist()} fidelity={fidelity(literal, shortcut):.15f}")
    print(f"     branch probabilities {np.round(probs, 12).tolist()}")

# The column map is a plain unitary for each outcome pattern
u = column_unitary(3, [1, 0, 1], phi)
print("unitary defect:", np.abs(u.conj().T @ u - np.eye(8)).max())
