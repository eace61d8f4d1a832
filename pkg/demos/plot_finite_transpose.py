"""
The best physical transpose of a qudit
======================================

Transposition is positive but not completely positive, so no device can
apply it exactly. This script builds the optimal approximation and checks
that every state is treated the same way.
"""
import numpy as np

from antimap import finite
from antimap.linalg import haar_random_state, sample_rng

# the covariant family has two weights, c_S on the symmetric subspace
# and c_A on the antisymmetric one; a small linear program picks them
for d in range(1, 7):
    p = finite.optimize_covariant(d)
    print(f"d={d}  c_S={p.c_S:.6f}  c_A={p.c_A:.1f}  fidelity={p.fidelity:.6f}  2/(d+1)={2 / (d + 1):.6f}")

# the optimal map is a mixture of the identity and the exact transpose
d = 3
rho = haar_random_state(d, 1)
out = finite.optimal_map(d, rho)
print("\noutput equals (I + rho^T)/(d+1):", np.allclose(out, (np.eye(d) + rho.T) / (d + 1)))

# universality: the fidelity does not depend on the input
fids = [finite.transpose_fidelity(finite.optimal_map(d, r), r)
        for r in (haar_random_state(d, sample_rng(5, i)) for i in range(200))]
print(f"fidelity over 200 random pure states: min {min(fids):.12f}, max {max(fids):.12f}")

# Kraus and Stinespring forms give the same channel
m = finite.optimal_machine(d)
print("Kraus operators:", len(m.kraus), " completeness residual:", m.kraus.completeness_residual())
print("isometry shape:", m.isometry.v.shape)
print("Kraus vs isometry:", np.abs(m.kraus.apply(rho) - m.isometry.apply(rho)).max())
