"""
Choi, Kraus and random channels
===============================

The channel helpers used throughout: convert between representations,
test physicality and compare random channels with the optimal bound.
"""
import numpy as np

from antimap.channels import (
    ChoiOperator,
    average_transpose_fidelity,
    choi_from_kraus,
    is_cp,
    is_tp,
    kraus_from_choi,
    random_tp_channel,
)
from antimap.linalg import sample_rng, swap_operator

# the swap operator is the Choi matrix of the transpose itself;
# it has a negative eigenvalue, so it is not a channel
swap = ChoiOperator(2, 2, swap_operator(2))
print("transpose is CP:", is_cp(swap), " TP:", is_tp(swap))

# a random channel survives a Choi -> Kraus -> Choi round trip
r = random_tp_channel(3, sample_rng(0, 0))
back = choi_from_kraus(kraus_from_choi(r))
print("round trip error:", np.abs(back.matrix - r.matrix).max())

# no random channel does better than 2/(d+1)
for d in (2, 3, 4):
    best = max(average_transpose_fidelity(random_tp_channel(d, sample_rng(d, i))) for i in range(200))
    print(f"d={d}  best of 200 random channels {best:.4f}  bound {2 / (d + 1):.4f}")
