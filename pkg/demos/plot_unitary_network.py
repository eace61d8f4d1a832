"""
One unitary, two machines
=========================

Extending the optimal transposition isometry to a unitary on three qudits
gives a network whose other output ports hold two optimal clones.
"""
import numpy as np

from antimap import dilation, finite
from antimap.linalg import haar_random_state, partial_trace

# the qubit network has only 0/1 entries
dil = dilation.build_unitary(2)
print(dil.u.astype(int))
print("matches the reference matrix:", dilation.matches_qubit_reference(dil))
print("ancilla:", np.round(dilation.ancilla_state(2) * np.sqrt(6), 12), "/ sqrt(6)")

# unitarity up to d = 5 (125 x 125)
for d in range(2, 6):
    print(f"d={d}  ||U^dag U - I|| = {dilation.build_unitary(d).unitarity_residual():.1e}")

# port 1 carries the approximate transpose, ports 2 and 3 the clones
d = 3
rho = haar_random_state(d, 7)
dil = dilation.build_unitary(d)
t = dilation.transpose_via_dilation(d, rho, dil)
c = dilation.clone_via_dilation(d, rho, dil)
print("\ntranspose fidelity:", finite.transpose_fidelity(t, rho), " expected", 2 / (d + 1))
for which in ("second", "first"):
    single = partial_trace(c, d, d, which)
    print("clone fidelity:", np.trace(rho @ single).real, " expected", (d + 3) / (2 * (d + 1)))
