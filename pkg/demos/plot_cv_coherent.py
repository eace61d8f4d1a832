"""
Transposing coherent states
===========================

For a light mode, transposition in the Fock basis sends |alpha> to
|alpha*>. The best physical map mixes a beam splitter with one ancilla
state chi, chosen as the top eigenvector of a reduced seed operator.
Everything lives in a truncated Fock space of N levels.
"""
import numpy as np

from antimap import cv

N = 20
seed = cv.coherent_seed(0.4 + 0.1j, N)
cmap = cv.optimal_chi(seed)
print("top eigenvalue:", cmap.lambda_max, " fidelity:", cmap.fidelity)
print("chi is the vacuum:", abs(abs(cmap.chi[0]) - 1) < 1e-12)

# the same map serves every coherent state; truncation shows up as a
# residual that shrinks quickly with the cutoff
for n in (10, 15, 20, 25):
    m = cv.optimal_chi(cv.vacuum_seed(n))
    print(f"N={n}  covariance residual at alpha=0.3: {cv.covariance_residual_cv(m, 0.3):.2e}")

# the map adds one unit of thermal noise: vacuum goes to p_n = 2^-(n+1)
vac = np.zeros((N, N))
vac[0, 0] = 1
out = cv.cv_apply(cmap, vac)
print("output photon distribution:", np.round(np.diag(out).real[:6], 6))

# squeezed seeds: no closed form, just the number
sq = cv.squeezed_seed(0.2, 30)
print("\nsqueezed r=0.2 fidelity:", cv.optimal_chi(sq).fidelity)
