"""Unitary realization of the optimal transposition on three systems.

The isometry families (``+`` is addition modulo d)

    V_pp      = sum_k |k, k+p, k+p><k+p|
    V^(S/A)_pq = 1/sqrt2 sum_k |k> (|k+p, k+q> +/- |k+q, k+p>) <k+q|,   p < q

are pairwise orthogonal isometries, and

    U = sum_p V_pp (x) <pp| + sum_{p<q} V^(S)_pq (x) (<pq| + <qp|)/sqrt2
                           + sum_{p<q} V^(A)_pq (x) (<pq| - <qp|)/sqrt2

is unitary on H (x) H (x) H. Fed with the symmetric ancilla ``|phi>`` on
systems 2 and 3 it reproduces the Stinespring isometry of the optimal map,
so tracing 2,3 gives the transposition and tracing 1 gives the cloner.

Basis ordering: ``|i>|j>|k> -> i d^2 + j d + k``.
"""
from dataclasses import dataclass

import numpy as np

from antimap.linalg import basis, dagger, sym_antisym_projectors, trace_out

KINDS = ("diagonal", "symmetric", "antisymmetric")

# d = 2 unitary, verbatim from the network model for qubits
QUBIT_UNITARY = np.array(
    [
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
    ]
)

QUBIT_ANCILLA = np.array([2, 1, 1, 0]) / np.sqrt(6)


@dataclass(frozen=True)
class IsometryFamily:
    d: int
    kind: str
    p: int
    q: int
    matrix: np.ndarray


@dataclass(frozen=True)
class UnitaryDilation:
    d: int
    u: np.ndarray
    phi: np.ndarray

    def unitarity_residual(self) -> float:
        ident = np.eye(self.d**3)
        return max(
            float(np.linalg.norm(dagger(self.u) @ self.u - ident)),
            float(np.linalg.norm(self.u @ dagger(self.u) - ident)),
        )

    def evolve(self, rho: np.ndarray) -> np.ndarray:
        """``U (rho (x) |phi><phi|) U^dag`` on the three systems."""
        full = np.kron(rho, np.outer(self.phi, self.phi.conj()))
        return self.u @ full @ dagger(self.u)


def _ket3(d: int, i: int, j: int, k: int) -> np.ndarray:
    v = np.zeros(d**3)
    v[(i * d + j) * d + k] = 1.0
    return v


def _family_unscaled(d: int, kind: str, p: int, q: int) -> np.ndarray:
    # symmetric/antisymmetric members without their 1/sqrt2; keeps U exact
    m = np.zeros((d**3, d))
    for k in range(d):
        kp, kq = (k + p) % d, (k + q) % d
        if kind == "diagonal":
            m[:, kp] += _ket3(d, k, kp, kp)
        else:
            sign = 1.0 if kind == "symmetric" else -1.0
            m[:, kq] += _ket3(d, k, kp, kq) + sign * _ket3(d, k, kq, kp)
    return m


def build_family(d: int, kind: str, p: int, q: int | None = None) -> IsometryFamily:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if q is None:
        q = p
    if not (0 <= p < d and 0 <= q < d):
        raise ValueError(f"indices p={p}, q={q} out of range for d={d}")
    if kind == "diagonal" and p != q:
        raise ValueError("the diagonal family needs p == q")
    if kind != "diagonal" and p >= q:
        raise ValueError(f"{kind} family needs p < q, got p={p}, q={q}")
    m = _family_unscaled(d, kind, p, q)
    if kind != "diagonal":
        m = m / np.sqrt(2)
    return IsometryFamily(d, kind, p, q, m)


def all_families(d: int) -> list:
    out = [build_family(d, "diagonal", p) for p in range(d)]
    for kind in ("symmetric", "antisymmetric"):
        out += [build_family(d, kind, p, q) for p in range(d) for q in range(p + 1, d)]
    return out


def ancilla_state(d: int) -> np.ndarray:
    """Symmetric ancilla ``sqrt(2/(d+1)) P_S sum_r |0>|r>`` on systems 2, 3."""
    if d < 2:
        raise ValueError("the dilation needs d >= 2")
    p_sym, _ = sym_antisym_projectors(d)
    seed = sum(np.kron(basis(d, 0), basis(d, r)) for r in range(d))
    phi = np.sqrt(2 / (d + 1)) * (p_sym @ seed)
    return phi.real


def build_unitary(d: int) -> UnitaryDilation:
    if d < 2:
        raise ValueError("the dilation needs d >= 2; for d = 1 the transposition is the identity")
    u = np.zeros((d**3, d**3))
    for p in range(d):
        pp = np.kron(basis(d, p), basis(d, p)).real
        u += np.kron(_family_unscaled(d, "diagonal", p, p), pp[None, :])
    for p in range(d):
        for q in range(p + 1, d):
            pq = np.kron(basis(d, p), basis(d, q)).real
            qp = np.kron(basis(d, q), basis(d, p)).real
            # the 1/sqrt2 of the isometry and of the bra combine to an exact 1/2
            for kind, bra in (("symmetric", pq + qp), ("antisymmetric", pq - qp)):
                u += np.kron(_family_unscaled(d, kind, p, q), bra[None, :]) / 2
    return UnitaryDilation(d, u, ancilla_state(d))


def _check_input(d: int, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} density matrix, got {rho.shape}")
    return rho


def transpose_via_dilation(d: int, rho: np.ndarray, dil: UnitaryDilation | None = None) -> np.ndarray:
    rho = _check_input(d, rho)
    dil = dil or build_unitary(d)
    return trace_out(dil.evolve(rho), [d, d, d], [1, 2])


def clone_via_dilation(d: int, rho: np.ndarray, dil: UnitaryDilation | None = None) -> np.ndarray:
    rho = _check_input(d, rho)
    dil = dil or build_unitary(d)
    return trace_out(dil.evolve(rho), [d, d, d], [0])


def matches_qubit_reference(dil: UnitaryDilation) -> bool:
    """Exact integer match of the d = 2 unitary against the published matrix."""
    if dil.d != 2:
        return False
    rounded = np.rint(dil.u)
    return bool(np.array_equal(rounded, dil.u) and np.array_equal(rounded.astype(int), QUBIT_UNITARY))
