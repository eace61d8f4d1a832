"""Displacement-covariant transposition of a single bosonic mode.

Everything lives in a Fock space truncated to ``|0>, ..., |N-1>``; two-mode
operators act on ``C^N (x) C^N`` with the first mode slowest. With the 50/50
beam splitter ``V = exp[pi/4 (a^dag b - a b^dag)]`` the covariant Choi
operators are ``R = 1/2 V (xi (x) I) V^dag`` for a state ``xi``. For a pure
seed ``rho`` the fidelity ``1/2 <chi| Tr_2[V^dag (rho^T (x) rho^T) V] |chi>``
is maximized by the top eigenvector ``chi`` of the reduced seed operator.

The transposition is taken in the Fock basis, so a coherent state
``|alpha>`` is mapped to ``|alpha*>``. Truncation is exact for two-mode
blocks of total photon number below N; checks should stay in that region.
"""
import re
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, lgamma

import numpy as np

from antimap.linalg import dagger, herm_eig, matrix_exp, partial_trace

DEFAULT_CUTOFF = 20
DEFAULT_TOL_LEAK = 1e-6


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested operator or state."""


class DegenerateEigenvalueWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FockSpace:
    cutoff: int = DEFAULT_CUTOFF
    tol_leak: float = DEFAULT_TOL_LEAK

    def __post_init__(self):
        if self.cutoff < 2:
            raise ValueError(f"Fock cutoff must be at least 2, got {self.cutoff}")

    def ladder(self):
        return ladder(self.cutoff)

    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.cutoff, dtype=float)).astype(complex)


@dataclass(frozen=True)
class CVSeed:
    rho: np.ndarray
    label: str = "custom"
    leakage: float = 0.0

    @property
    def cutoff(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class CVOptimalMap:
    chi: np.ndarray
    lambda_max: float
    choi: np.ndarray
    seed: CVSeed | None = None
    gap: float = field(default=np.inf)

    @property
    def cutoff(self) -> int:
        return self.chi.shape[0]

    @property
    def fidelity(self) -> float:
        return self.lambda_max / 2


def ladder(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated annihilation and creation operators."""
    if N < 2:
        raise ValueError(f"Fock cutoff must be at least 2, got {N}")
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)
    return a, dagger(a)


def coherent_leakage(alpha: complex, N: int) -> float:
    """Poisson weight of the exact coherent state beyond level N - 1."""
    x = abs(alpha) ** 2
    if x == 0:
        return 0.0
    logs = [-x + n * np.log(x) - lgamma(n + 1) for n in range(N)]
    return float(max(0.0, 1.0 - np.exp(logs).sum()))


def squeezed_amplitudes(r: float, N: int) -> np.ndarray:
    """Exact Fock amplitudes of ``S(r)|0>`` for ``S(r) = exp[r/2 (a^2 - a^dag^2)]``."""
    c = np.zeros(N)
    t = np.tanh(r)
    for m in range((N + 1) // 2):
        c[2 * m] = (-t) ** m * np.sqrt(float(factorial(2 * m))) / (2**m * factorial(m))
    return c / np.sqrt(np.cosh(r))


def squeezed_leakage(r: float, N: int) -> float:
    return float(max(0.0, 1.0 - np.sum(squeezed_amplitudes(r, N) ** 2)))


def displacement(alpha: complex, N: int, tol_leak: float = DEFAULT_TOL_LEAK) -> np.ndarray:
    """``D(alpha) = exp(alpha a^dag - alpha* a)`` at cutoff N.

    Raises ``TruncationError`` when the coherent state ``D(alpha)|0>`` would
    lose more than ``tol_leak`` of its weight beyond the cutoff.
    """
    leak = coherent_leakage(alpha, N)
    if leak > tol_leak:
        raise TruncationError(f"coherent amplitude {alpha} leaks {leak:.2e} beyond cutoff {N}")
    a, ad = ladder(N)
    return matrix_exp(alpha * ad - np.conj(alpha) * a)


def squeezing(r: float, N: int, tol_leak: float = DEFAULT_TOL_LEAK) -> np.ndarray:
    leak = squeezed_leakage(r, N)
    if leak > tol_leak:
        raise TruncationError(f"squeezing r={r} leaks {leak:.2e} beyond cutoff {N}")
    a, ad = ladder(N)
    return matrix_exp(r / 2 * (a @ a - ad @ ad))


@lru_cache(maxsize=8)
def _beam_splitter(N: int) -> np.ndarray:
    a, _ = ladder(N)
    ident = np.eye(N)
    a1, a2 = np.kron(a, ident), np.kron(ident, a)
    return matrix_exp(np.pi / 4 * (dagger(a1) @ a2 - a1 @ dagger(a2)))


def beam_splitter(N: int) -> np.ndarray:
    """50/50 beam splitter ``exp[pi/4 (a^dag b - a b^dag)]`` on two truncated modes.

    The generator conserves total photon number, so the truncated operator
    is exactly unitary; blocks with total number >= N are distorted.
    """
    return _beam_splitter(int(N)).copy()


def two_mode_number(N: int) -> np.ndarray:
    n = np.diag(np.arange(N, dtype=float))
    ident = np.eye(N)
    return np.kron(n, ident) + np.kron(ident, n)


def _pure_seed(psi: np.ndarray, label: str, leakage: float) -> CVSeed:
    return CVSeed(np.outer(psi, psi.conj()), label, leakage)


def vacuum_seed(N: int) -> CVSeed:
    psi = np.zeros(N, dtype=complex)
    psi[0] = 1
    return _pure_seed(psi, "vacuum", 0.0)


def coherent_seed(alpha: complex, N: int, tol_leak: float = DEFAULT_TOL_LEAK) -> CVSeed:
    d = displacement(alpha, N, tol_leak)
    return _pure_seed(d[:, 0], f"coherent({complex(alpha)})", coherent_leakage(alpha, N))


def squeezed_seed(r: float, N: int, tol_leak: float = DEFAULT_TOL_LEAK) -> CVSeed:
    s = squeezing(r, N, tol_leak)
    return _pure_seed(s[:, 0], f"squeezed({float(r)})", squeezed_leakage(r, N))


def custom_seed(rho: np.ndarray, tol_leak: float = DEFAULT_TOL_LEAK) -> CVSeed:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("seed must be a square matrix")
    if np.linalg.norm(rho - dagger(rho)) > 1e-10:
        raise ValueError("seed must be Hermitian")
    if np.linalg.eigvalsh(rho)[0] < -1e-10:
        raise ValueError("seed must be positive")
    leak = abs(1 - np.trace(rho).real)
    if leak > tol_leak:
        raise ValueError(f"seed trace deviates from 1 by {leak:.2e}")
    return CVSeed(rho, "custom", leak)


_SEED_RE = re.compile(
    r"^(?:(?P<vac>vacuum)|coherent:(?P<re>[^,]+),(?P<im>[^,]+)|squeezed:(?P<r>[^,]+))$"
)


def parse_seed(spec: str, N: int, tol_leak: float = DEFAULT_TOL_LEAK) -> CVSeed:
    """Seed from ``vacuum``, ``coherent:<re>,<im>`` or ``squeezed:<r>``."""
    m = _SEED_RE.match(spec.strip())
    if m is None:
        raise ValueError(f"unrecognized seed specification {spec!r}")
    try:
        if m.group("vac"):
            return vacuum_seed(N)
        if m.group("re") is not None:
            return coherent_seed(complex(float(m.group("re")), float(m.group("im"))), N, tol_leak)
        return squeezed_seed(float(m.group("r")), N, tol_leak)
    except TruncationError:
        raise
    except ValueError as exc:
        raise ValueError(f"bad number in seed specification {spec!r}") from exc


def reduced_seed_operator(seed: CVSeed, bs: np.ndarray | None = None) -> np.ndarray:
    """``Tr_2[V^dag (rho^T (x) rho^T) V]`` for the seed ``rho``."""
    N = seed.cutoff
    v = beam_splitter(N) if bs is None else bs
    if v.shape != (N * N, N * N):
        raise ValueError(f"beam splitter shape {v.shape} does not match cutoff {N}")
    rt = seed.rho.T
    return partial_trace(dagger(v) @ np.kron(rt, rt) @ v, N, N, "second")


def choi_from_chi(chi: np.ndarray, bs: np.ndarray | None = None) -> np.ndarray:
    """``1/2 V (|chi><chi| (x) I) V^dag`` on output (x) input."""
    N = chi.shape[0]
    v = beam_splitter(N) if bs is None else bs
    return 0.5 * v @ np.kron(np.outer(chi, chi.conj()), np.eye(N)) @ dagger(v)


def map_from_chi(chi: np.ndarray, seed: CVSeed | None = None, bs: np.ndarray | None = None) -> CVOptimalMap:
    """Covariant map for an arbitrary pure ``xi = |chi><chi|`` (not necessarily optimal)."""
    chi = np.asarray(chi, dtype=complex)
    chi = chi / np.linalg.norm(chi)
    choi = choi_from_chi(chi, bs)
    lam = np.nan
    if seed is not None:
        red = reduced_seed_operator(seed, bs)
        lam = float(np.real(chi.conj() @ red @ chi))
    return CVOptimalMap(chi, lam, choi, seed)


def _tie_break(vecs: np.ndarray) -> np.ndarray:
    # project basis states in order onto the degenerate eigenspace; first non-null wins
    proj = vecs @ dagger(vecs)
    for k in range(proj.shape[0]):
        col = proj[:, k]
        if np.linalg.norm(col) > 1e-8:
            return col / np.linalg.norm(col)
    return vecs[:, 0]


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-12 * np.abs(v).max()))
    return v * (abs(v[k]) / v[k])


def optimal_chi(seed: CVSeed, tol: float = 1e-10, bs: np.ndarray | None = None) -> CVOptimalMap:
    """Top eigenvector of the reduced seed operator and the resulting optimal map.

    A top eigenvalue degenerate within ``tol`` triggers a
    ``DegenerateEigenvalueWarning``; the eigenvector is then chosen by
    projecting ``|0>, |1>, ...`` onto the top eigenspace.
    """
    N = seed.cutoff
    v = beam_splitter(N) if bs is None else bs
    spec = herm_eig(reduced_seed_operator(seed, v))
    lam = spec.eigenvalues
    gap = float(lam[0] - lam[1])
    if gap < tol:
        top = int(np.sum(lam >= lam[0] - tol))
        warnings.warn(
            f"top eigenvalue of the reduced seed operator is {top}-fold degenerate (gap {gap:.2e})",
            DegenerateEigenvalueWarning,
            stacklevel=2,
        )
        chi = _tie_break(spec.eigenvectors[:, :top])
    else:
        chi = spec.eigenvectors[:, 0]
    chi = _fix_phase(chi)
    return CVOptimalMap(chi, float(lam[0]), choi_from_chi(chi, v), seed, gap)


def cv_fidelity(seed: CVSeed, cmap: CVOptimalMap) -> float:
    """``Tr[(rho^T (x) rho^T) R]`` evaluated directly on the Choi operator."""
    if seed.cutoff != cmap.cutoff:
        raise ValueError("seed and map have different cutoffs")
    rt = seed.rho.T
    return float(np.real(np.trace(np.kron(rt, rt) @ cmap.choi)))


def cv_apply(cmap: CVOptimalMap, sigma: np.ndarray) -> np.ndarray:
    """``Tr_2[(I (x) sigma^T) R]``."""
    N = cmap.cutoff
    sigma = np.asarray(sigma)
    if sigma.shape != (N, N):
        raise ValueError(f"input must be {N}x{N}, got {sigma.shape}")
    return partial_trace(np.kron(np.eye(N), sigma.T) @ cmap.choi, N, N, "second")


def trace_norm(m: np.ndarray) -> float:
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def covariance_residual_cv(cmap: CVOptimalMap, alpha: complex, rho: np.ndarray | None = None) -> float:
    """``||M(D rho D^dag) - D* M(rho) D^T||_1`` at the map's seed (or ``rho``)."""
    if rho is None:
        if cmap.seed is None:
            raise ValueError("map carries no seed; pass rho explicitly")
        rho = cmap.seed.rho
    d = displacement(alpha, cmap.cutoff, tol_leak=1.0)
    lhs = cv_apply(cmap, d @ rho @ dagger(d))
    rhs = d.conj() @ cv_apply(cmap, rho) @ d.T
    return trace_norm(lhs - rhs)


def choi_trace_residual(cmap: CVOptimalMap, block: int | None = None) -> float:
    """``||Tr_1[R] - I||_F`` restricted to input levels below ``block``."""
    N = cmap.cutoff
    block = N if block is None else block
    t = partial_trace(cmap.choi, N, N, "first")[:block, :block]
    return float(np.linalg.norm(t - np.eye(block)))
