"""Dense complex linear algebra and the double-ket calculus.

Operators are plain 2-D ``numpy`` arrays. Bipartite indices are flattened
lexicographically, ``(i, j) -> i * d2 + j``, so the first tensor factor is
the slowest-varying one. Every other module relies on this ordering.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-10


class NotHermitianError(ValueError):
    pass


@dataclass(frozen=True)
class HermitianSpectrum:
    """Eigen-decomposition with eigenvalues sorted in descending order.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.linalg.norm(m - dagger(m)) <= tol


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with ``(a (x) b)[i*rb + k, j*cb + l] = a[i, j] * b[k, l]``."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(*ops: np.ndarray) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def trace_out(m: np.ndarray, dims: Sequence[int], systems: Sequence[int]) -> np.ndarray:
    """Trace the listed subsystems out of an operator on ``prod(dims)``.

    The remaining subsystems keep their original relative order.
    """
    m = np.asarray(m)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"operator of shape {m.shape} does not act on dims {dims}")
    systems = sorted(set(systems))
    if any(s < 0 or s >= len(dims) for s in systems):
        raise ValueError(f"subsystem index out of range for dims {dims}")
    n = len(dims)
    t = m.reshape(dims + dims)
    # trace highest index first so the remaining axis numbers stay valid
    for s in reversed(systems):
        n_now = t.ndim // 2
        t = np.trace(t, axis1=s, axis2=s + n_now)
    keep = [dims[k] for k in range(n) if k not in systems]
    dk = int(np.prod(keep)) if keep else 1
    return t.reshape(dk, dk)


def partial_trace(m: np.ndarray, d1: int, d2: int, which: str = "second") -> np.ndarray:
    """``which="first"`` returns Tr_1[m], ``which="second"`` returns Tr_2[m]."""
    if which not in ("first", "second"):
        raise ValueError("which must be 'first' or 'second'")
    return trace_out(m, [d1, d2], [0] if which == "first" else [1])


def dket(a: np.ndarray) -> np.ndarray:
    """Double-ket of an operator: ``|A>> = sum_ij A_ij |i>|j>``.

    The result is the flat amplitude vector of length ``rows * cols``.
    ``undket`` recovers the operator.
    """
    return np.asarray(a).reshape(-1).copy()


def undket(v: np.ndarray, d1: int, d2: int) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    if v.size != d1 * d2:
        raise ValueError(f"vector of length {v.size} is not a {d1}x{d2} double-ket")
    return v.reshape(d1, d2).copy()


def basis(d: int, k: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[k] = 1.0
    return e


def swap_operator(d: int) -> np.ndarray:
    """The swap E on C^d (x) C^d, ``E|i>|j> = |j>|i>``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    e = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    e[(j * d + i).ravel(), (i * d + j).ravel()] = 1.0
    return e


def sym_antisym_projectors(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Projectors ``(P_S, P_A) = ((I + E) / 2, (I - E) / 2)``."""
    e = swap_operator(d)
    ident = np.eye(d * d, dtype=complex)
    return (ident + e) / 2, (ident - e) / 2


def haar_random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a Ginibre matrix.

    The phases of ``diag(R)`` are divided out, otherwise the distribution is
    not Haar.
    """
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_random_isometry(d_in: int, d_out: int, rng: np.random.Generator) -> np.ndarray:
    """First ``d_in`` columns of a Haar unitary on C^d_out."""
    if d_in > d_out:
        raise ValueError("isometry needs d_in <= d_out")
    return haar_random_unitary(d_out, rng)[:, :d_in]


def haar_random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return psi / np.linalg.norm(psi)


def haar_random_state(d: int, rng_seed) -> np.ndarray:
    """Rank-one density matrix of a Haar-random pure state on C^d.

    ``rng_seed`` may be an int, a sequence of ints or a ``numpy`` Generator.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if d == 1:
        return np.ones((1, 1), dtype=complex)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    psi = haar_random_ket(d, rng)
    return np.outer(psi, psi.conj())


def sample_rng(rng_seed: int, index: int) -> np.random.Generator:
    """Independent stream for sample ``index``; identical regardless of execution order."""
    return np.random.default_rng([int(rng_seed), int(index)])


def herm_eig(m: np.ndarray, tol: float = DEFAULT_TOL) -> HermitianSpectrum:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.linalg.norm(m)))
    if np.linalg.norm(m - dagger(m)) > tol * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((m + dagger(m)) / 2)
    return HermitianSpectrum(w[::-1].copy(), v[:, ::-1].copy())


def matrix_exp(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {m.shape}")
    return scipy.linalg.expm(m)


def is_density_matrix(rho: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    rho = np.asarray(rho)
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return np.linalg.eigvalsh((rho + dagger(rho)) / 2)[0] >= -tol * rho.shape[0]
