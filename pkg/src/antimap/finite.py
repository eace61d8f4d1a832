"""Optimal universal transposition in finite dimension.

Every SU(d)-covariant candidate has the Choi operator
``R = c_S P_S + c_A P_A``. Trace preservation fixes
``c_S (d + 1) / 2 + c_A (d - 1) / 2 = 1`` and the fidelity on any pure state
is ``c_S``, so the optimum is the vertex ``c_S = 2 / (d + 1)``, ``c_A = 0``:

    M(rho) = (I + rho^T) / (d + 1),     F = 2 / (d + 1).

The transposition is taken in the computational basis. The Stinespring
isometry of the optimal map also yields the optimal 1 -> 2 cloner on the
ancillas.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from antimap.channels import (
    ChoiOperator,
    KrausSet,
    StinespringIsometry,
    choi_from_kraus,
)
from antimap.linalg import DEFAULT_TOL, haar_random_state, sample_rng, sym_antisym_projectors


@dataclass(frozen=True)
class CovariantParams:
    d: int
    c_S: float
    c_A: float

    def constraint_residual(self) -> float:
        return abs(self.c_S * (self.d + 1) / 2 + self.c_A * (self.d - 1) / 2 - 1)

    def is_feasible(self, tol: float = DEFAULT_TOL) -> bool:
        return self.c_S >= -tol and self.c_A >= -tol and self.constraint_residual() <= tol

    @property
    def fidelity(self) -> float:
        return self.c_S


@dataclass(frozen=True)
class OptimalTransposeMachine:
    d: int
    choi: ChoiOperator
    kraus: KrausSet
    isometry: StinespringIsometry


def _check_dim(d: int):
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")


def _check_state(rho: np.ndarray, d: int | None = None, tol: float = DEFAULT_TOL) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if d is not None and rho.shape[0] != d:
        raise ValueError(f"expected a {d}x{d} density matrix, got {rho.shape}")
    if abs(np.trace(rho) - 1) > tol * max(1, rho.shape[0]):
        raise ValueError("density matrix must have unit trace")
    return rho


def covariant_choi(params: CovariantParams) -> ChoiOperator:
    p_sym, p_anti = sym_antisym_projectors(params.d)
    return ChoiOperator(params.d, params.d, params.c_S * p_sym + params.c_A * p_anti)


def feasible_segment(d: int, c_A: np.ndarray) -> np.ndarray:
    """``c_S`` on the trace-preserving line as a function of ``c_A``."""
    return (2 - np.asarray(c_A, dtype=float) * (d - 1)) / (d + 1)


def optimize_covariant(d: int) -> CovariantParams:
    """Maximize the covariant fidelity ``c_S`` over the feasible segment.

    Solved as a two-variable linear program; the closed form is checked on
    the result.
    """
    _check_dim(d)
    # P_A vanishes for d = 1, so c_A carries no meaning there
    c_A_bound = (0, None) if d > 1 else (0, 0)
    res = linprog(
        c=[-1.0, 0.0],
        A_eq=[[(d + 1) / 2, (d - 1) / 2]],
        b_eq=[1.0],
        bounds=[(0, None), c_A_bound],
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"covariant optimization failed: {res.message}")
    params = CovariantParams(d, float(res.x[0]), float(res.x[1]))
    assert abs(params.c_S - 2 / (d + 1)) < 1e-12 and abs(params.c_A) < 1e-12
    return params


def optimal_fidelity(d: int) -> float:
    _check_dim(d)
    return 2 / (d + 1)


def optimal_choi(d: int) -> ChoiOperator:
    _check_dim(d)
    p_sym, _ = sym_antisym_projectors(d)
    return ChoiOperator(d, d, 2 / (d + 1) * p_sym)


def optimal_map(d: int, rho: np.ndarray) -> np.ndarray:
    _check_dim(d)
    rho = _check_state(rho, d)
    return (np.eye(d) + rho.T) / (d + 1)


def kraus_set(d: int) -> KrausSet:
    """Operators ``(|m><n| + |n><m|) / sqrt(2 (d + 1))`` for all ordered pairs (m, n)."""
    _check_dim(d)
    norm = 1 / np.sqrt(2 * (d + 1))
    ops = []
    for m in range(d):
        for n in range(d):
            k = np.zeros((d, d), dtype=complex)
            k[m, n] += norm
            k[n, m] += norm
            ops.append(k)
    return KrausSet(tuple(ops))


def stinespring(d: int) -> StinespringIsometry:
    """``V = sum_mn M_mn (x) |m n>_23``, a ``d^3 x d`` isometry.

    System 1 carries the transposed output, systems 2 and 3 the two clones.
    """
    ops = kraus_set(d).operators
    v = np.zeros((d**3, d), dtype=complex)
    for idx, k in enumerate(ops):
        anc = np.zeros((d * d, 1))
        anc[idx] = 1.0  # idx == m * d + n
        v += np.kron(k, anc)
    return StinespringIsometry(v, (d, d))


def optimal_machine(d: int) -> OptimalTransposeMachine:
    kraus = kraus_set(d)
    return OptimalTransposeMachine(d, choi_from_kraus(kraus), kraus, stinespring(d))


def cloning_map(d: int, rho: np.ndarray) -> np.ndarray:
    """Optimal symmetric 1 -> 2 cloner ``2/(d+1) P_S (I (x) rho) P_S``."""
    _check_dim(d)
    rho = _check_state(rho, d)
    p_sym, _ = sym_antisym_projectors(d)
    return 2 / (d + 1) * p_sym @ np.kron(np.eye(d), rho) @ p_sym


def clone_fidelity(d: int) -> float:
    """Single-clone fidelity ``(d + 3) / (2 (d + 1))`` of the optimal cloner."""
    _check_dim(d)
    return (d + 3) / (2 * (d + 1))


def anticlone_equivalence_check(d: int, samples: int, rng_seed: int) -> float:
    """Largest Frobenius gap between ``optimal_map`` and the ancilla trace of V."""
    iso = stinespring(d)
    worst = 0.0
    for i in range(samples):
        rho = haar_random_state(d, sample_rng(rng_seed, i))
        worst = max(worst, float(np.linalg.norm(optimal_map(d, rho) - iso.apply(rho))))
    return worst


def transpose_fidelity(output: np.ndarray, rho: np.ndarray) -> float:
    """``Tr[rho^T output]``; the fidelity with the transposed pure input."""
    return float(np.real(np.trace(np.asarray(rho).T @ output)))

