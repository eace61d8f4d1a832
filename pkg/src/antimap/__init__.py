"""Optimal physical realizations of the transposition map."""
from antimap.channels import (
    ChoiOperator,
    KrausSet,
    StinespringIsometry,
    apply_choi,
    average_transpose_fidelity,
    choi_from_kraus,
    is_cp,
    is_tp,
    kraus_from_choi,
    transpose_covariance_residual,
)
from antimap.cv import CVOptimalMap, CVSeed, FockSpace, cv_apply, cv_fidelity, optimal_chi, parse_seed
from antimap.dilation import UnitaryDilation, ancilla_state, build_unitary
from antimap.finite import (
    CovariantParams,
    cloning_map,
    kraus_set,
    optimal_fidelity,
    optimal_map,
    optimize_covariant,
    stinespring,
)

__version__ = "0.1.0"
