# Beyond CZ bonds: a general resource qubit, measurement basis and coupling.
#
# The branch operators are unitary only for CZ-like couplings; the
# phi-gate column leaves a large defect.

import math

import numpy as np

from wgsrandom import GeneralizedStep, generalized_m, unitarity_defect
from wgsrandom.scheme import kraus_completeness_defect

h = 1 / math.sqrt(2)
cz = np.diag([1, 1, 1, -1])
step = GeneralizedStep(h, h, 0.0, cz)
print("CZ branches:\n", generalized_m(step, 0).round(3), "\n", generalized_m(step, 1).round(3))
print("CZ defect", unitarity_defect(step))

for k in (1, 3, 5, 7, 8):
    phi = k * math.pi / 8
    s = GeneralizedStep(h, h, 0.0, np.diag([1, 1, 1, np.exp(-1j * phi)]))
    print(f"phi={k}pi/8 defect={unitarity_defect(s):.4f} completeness={kraus_completeness_defect(s):.1e}")
