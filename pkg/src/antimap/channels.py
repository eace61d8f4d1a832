"""Choi, Kraus and Stinespring representations of quantum maps.

Choi convention: the operator lives on ``H_out (x) H_in`` and

    R = sum_jk M(|j><k|) (x) |j><k|,      M(rho) = Tr_2[(I (x) rho^T) R].

With this convention a Kraus operator ``K`` contributes ``|K>><<K|``.
"""
from dataclasses import dataclass, field

import numpy as np

from antimap.linalg import (
    DEFAULT_TOL,
    dagger,
    dket,
    haar_random_isometry,
    haar_random_unitary,
    herm_eig,
    partial_trace,
    sample_rng,
    sym_antisym_projectors,
    trace_out,
    undket,
)


class NotCPError(ValueError):
    pass


class NotTPError(ValueError):
    pass


@dataclass(frozen=True)
class ChoiOperator:
    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        n = self.dim_in * self.dim_out
        if np.shape(self.matrix) != (n, n):
            raise ValueError(
                f"Choi matrix must be {n}x{n} for dims out={self.dim_out}, in={self.dim_in}"
            )


@dataclass(frozen=True)
class KrausSet:
    operators: tuple

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(np.asarray(k) for k in self.operators))
        if not self.operators:
            raise ValueError("a Kraus set needs at least one operator")
        shape = self.operators[0].shape
        if any(k.shape != shape for k in self.operators):
            raise ValueError("Kraus operators have inconsistent shapes")

    def __len__(self):
        return len(self.operators)

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    def completeness_residual(self) -> float:
        s = sum(dagger(k) @ k for k in self.operators)
        return float(np.linalg.norm(s - np.eye(self.dim_in)))

    def is_complete(self, tol: float = DEFAULT_TOL) -> bool:
        return self.completeness_residual() <= tol

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho)
        if rho.shape != (self.dim_in, self.dim_in):
            raise ValueError(f"input must be {self.dim_in}x{self.dim_in}")
        return sum(k @ rho @ dagger(k) for k in self.operators)


@dataclass(frozen=True)
class StinespringIsometry:
    """Isometry ``v: H_in -> H_out (x) H_anc_1 (x) ... (x) H_anc_n``."""

    v: np.ndarray
    anc_dims: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "anc_dims", tuple(int(d) for d in self.anc_dims))
        if self.v.shape[0] % self.anc_dim:
            raise ValueError("output dimension is not divisible by the ancilla dimension")

    @property
    def anc_dim(self) -> int:
        return int(np.prod(self.anc_dims)) if self.anc_dims else 1

    @property
    def dim_in(self) -> int:
        return self.v.shape[1]

    @property
    def dim_out(self) -> int:
        return self.v.shape[0] // self.anc_dim

    @property
    def dims(self) -> list:
        return [self.dim_out, *self.anc_dims]

    def isometry_residual(self) -> float:
        return float(np.linalg.norm(dagger(self.v) @ self.v - np.eye(self.dim_in)))

    def dilate(self, rho: np.ndarray) -> np.ndarray:
        return self.v @ rho @ dagger(self.v)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Channel output: the ancillas are traced out."""
        return trace_out(self.dilate(rho), self.dims, range(1, len(self.dims)))

    def complementary(self, rho: np.ndarray) -> np.ndarray:
        """State of the ancillas after the principal output is traced out."""
        return trace_out(self.dilate(rho), self.dims, [0])

    def to_kraus(self) -> KrausSet:
        # row index of v is out * anc_dim + a; slicing a fixes one Kraus operator
        t = self.v.reshape(self.dim_out, self.anc_dim, self.dim_in)
        return KrausSet(tuple(t[:, a, :] for a in range(self.anc_dim)))


def choi_from_kraus(k: KrausSet) -> ChoiOperator:
    vecs = np.stack([dket(op) for op in k.operators], axis=1)
    return ChoiOperator(k.dim_in, k.dim_out, vecs @ dagger(vecs))


def kraus_from_choi(r: ChoiOperator, tol: float = DEFAULT_TOL) -> KrausSet:
    """Canonical Kraus operators ``sqrt(lambda_k) * unvec(v_k)`` from the spectrum of ``r``.

    Eigenvalues below ``tol`` are dropped; one below ``-tol * d`` raises
    ``NotCPError``.
    """
    spec = herm_eig(r.matrix, tol)
    lam = spec.eigenvalues
    d = r.dim_in * r.dim_out
    if lam[-1] < -tol * d:
        raise NotCPError(f"Choi operator has negative eigenvalue {lam[-1]:.3e}")
    ops = [
        np.sqrt(lam[k]) * undket(spec.eigenvectors[:, k], r.dim_out, r.dim_in)
        for k in range(len(lam))
        if lam[k] > tol
    ]
    if not ops:
        ops = [np.zeros((r.dim_out, r.dim_in), dtype=complex)]
    return KrausSet(tuple(ops))


def apply_choi(r: ChoiOperator, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (r.dim_in, r.dim_in):
        raise ValueError(f"input must be {r.dim_in}x{r.dim_in}, got {rho.shape}")
    big = np.kron(np.eye(r.dim_out), rho.T) @ r.matrix
    return partial_trace(big, r.dim_out, r.dim_in, "second")


def choi_from_isometry(iso: StinespringIsometry) -> ChoiOperator:
    return choi_from_kraus(iso.to_kraus())


def min_eigenvalue(r: ChoiOperator) -> float:
    h = (r.matrix + dagger(r.matrix)) / 2
    return float(np.linalg.eigvalsh(h)[0])


def is_cp(r: ChoiOperator, tol: float = DEFAULT_TOL) -> bool:
    # eigensolver error grows with the dimension
    return min_eigenvalue(r) >= -tol * r.dim_in * r.dim_out


def tp_residual(r: ChoiOperator) -> float:
    t = partial_trace(r.matrix, r.dim_out, r.dim_in, "first")
    return float(np.linalg.norm(t - np.eye(r.dim_in)))


def is_tp(r: ChoiOperator, tol: float = DEFAULT_TOL) -> bool:
    return tp_residual(r) <= tol


def transpose_covariance_residual(r: ChoiOperator, samples: int, rng_seed: int) -> float:
    """Largest ``||(U* (x) U*) R (U^T (x) U^T) - R||_F`` over Haar samples of U."""
    if r.dim_in != r.dim_out:
        raise ValueError("covariance under U* (x) U* needs dim_in == dim_out")
    d = r.dim_in
    worst = 0.0
    for i in range(samples):
        u = haar_random_unitary(d, sample_rng(rng_seed, i))
        w = np.kron(u.conj(), u.conj())
        worst = max(worst, float(np.linalg.norm(w @ r.matrix @ dagger(w) - r.matrix)))
    return worst


def average_transpose_fidelity(r: ChoiOperator, tol: float = DEFAULT_TOL) -> float:
    """Haar average of ``Tr[rho^T M(rho)]`` over pure inputs.

    Uses the first-moment identity ``E[psi (x) psi] = 2 P_S / (d (d + 1))``
    together with ``Tr[rho^T M(rho)] = Tr[(rho^T (x) rho^T) R]``; the
    transposed pure states are Haar distributed as well.
    """
    if r.dim_in != r.dim_out:
        raise ValueError("transpose fidelity needs dim_in == dim_out")
    if not is_tp(r, tol * max(1, r.dim_in)):
        raise NotTPError("average transpose fidelity is defined for trace-preserving maps")
    d = r.dim_in
    p_sym, _ = sym_antisym_projectors(d)
    return float(np.real(np.trace(r.matrix @ p_sym))) * 2 / (d * (d + 1))


def random_tp_channel(d: int, rng: np.random.Generator, anc_dim: int | None = None) -> ChoiOperator:
    """Choi operator of ``rho -> Tr_anc[W rho W^dag]`` with a Haar-random isometry W."""
    anc = d * d if anc_dim is None else anc_dim
    w = haar_random_isometry(d, d * anc, rng)
    return choi_from_isometry(StinespringIsometry(w, (anc,)))
