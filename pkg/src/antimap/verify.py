"""Named numerical checks over every module.

Each check returns a nonnegative residual; a check passes iff its residual
is at most the tolerance. Results are keyed by name and independent of the
order (or thread) in which they are evaluated.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from functools import partial

import numpy as np

from antimap import cv, dilation, finite
from antimap.channels import (
    apply_choi,
    average_transpose_fidelity,
    choi_from_kraus,
    kraus_from_choi,
    min_eigenvalue,
    random_tp_channel,
    tp_residual,
    transpose_covariance_residual,
)
from antimap.linalg import (
    dagger,
    dket,
    haar_random_state,
    partial_trace,
    sample_rng,
    swap_operator,
    sym_antisym_projectors,
)


def _fro(m) -> float:
    return float(np.linalg.norm(m))


def _random_matrix(d: int, rng) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def linalg_checks(d: int, rng_seed: int) -> dict:
    rng = sample_rng(rng_seed, 1000 + d)
    e = swap_operator(d)
    p_sym, p_anti = sym_antisym_projectors(d)
    ident = np.eye(d * d)
    a, b, c = (_random_matrix(d, rng) for _ in range(3))
    ket_ab = np.outer(dket(a), dket(b).conj())
    return {
        "swap_involution": _fro(e @ e - ident),
        "projector_idempotence": max(_fro(p_sym @ p_sym - p_sym), _fro(p_anti @ p_anti - p_anti)),
        "projector_completeness": _fro(p_sym + p_anti - ident),
        "projector_orthogonality": _fro(p_sym @ p_anti),
        "ptrace_second_identity": _fro(partial_trace(ket_ab, d, d, "second") - a @ dagger(b)),
        "ptrace_first_identity": _fro(partial_trace(ket_ab, d, d, "first") - a.T @ b.conj()),
        "dket_identity": _fro(np.kron(a, c) @ dket(b) - dket(a @ b @ c.T)),
    }


def channel_checks(d: int, samples: int, rng_seed: int) -> dict:
    choi = finite.optimal_choi(d)
    rnd = random_tp_channel(d, sample_rng(rng_seed, 2000 + d))
    roundtrip = _fro(choi_from_kraus(kraus_from_choi(rnd)).matrix - rnd.matrix)
    bound_excess = 0.0
    for i in range(samples):
        r = random_tp_channel(d, sample_rng(rng_seed, 3000 + 100 * d + i))
        bound_excess = max(bound_excess, average_transpose_fidelity(r) - 2 / (d + 1))
    return {
        "kraus_choi_roundtrip": roundtrip,
        "optimal_choi_cp": max(0.0, -min_eigenvalue(choi)),
        "optimal_choi_tp": tp_residual(choi),
        "optimal_choi_covariance": transpose_covariance_residual(choi, min(samples, 20), rng_seed),
        "average_fidelity": abs(average_transpose_fidelity(choi) - 2 / (d + 1)),
        "optimality_bound_excess": max(0.0, bound_excess),
    }


def finite_checks(d: int, samples: int, rng_seed: int) -> dict:
    params = finite.optimize_covariant(d)
    kraus = finite.kraus_set(d)
    iso = finite.stinespring(d)
    choi = finite.optimal_choi(d)
    f_opt = finite.optimal_fidelity(d)
    agree = fid = clone = clone_fid = 0.0
    for i in range(samples):
        rho = haar_random_state(d, sample_rng(rng_seed, i))
        closed = finite.optimal_map(d, rho)
        agree = max(
            agree,
            _fro(closed - kraus.apply(rho)),
            _fro(closed - apply_choi(choi, rho)),
            _fro(closed - iso.apply(rho)),
        )
        fid = max(fid, abs(finite.transpose_fidelity(closed, rho) - f_opt))
        c = finite.cloning_map(d, rho)
        clone = max(clone, _fro(c - iso.complementary(rho)))
        single = partial_trace(c, d, d, "first")
        clone_fid = max(clone_fid, abs(np.real(np.trace(rho @ single)) - finite.clone_fidelity(d)))
    return {
        "fidelity_closed_form": abs(f_opt * (d + 1) - 2),
        "covariant_optimum": abs(params.c_S - 2 / (d + 1)) + abs(params.c_A),
        "kraus_completeness": kraus.completeness_residual(),
        "kraus_choi": _fro(choi_from_kraus(kraus).matrix - choi.matrix),
        "isometry": iso.isometry_residual(),
        "realizations_agree": agree,
        "fidelity_universality": fid,
        "cloning_from_isometry": clone,
        "clone_fidelity": clone_fid,
    }


def dilation_checks(d: int, samples: int, rng_seed: int) -> dict:
    dil = dilation.build_unitary(d)
    iso = finite.stinespring(d)
    tr = cl = ext = 0.0
    for i in range(samples):
        rho = haar_random_state(d, sample_rng(rng_seed, i))
        tr = max(tr, _fro(dilation.transpose_via_dilation(d, rho, dil) - finite.optimal_map(d, rho)))
        cl = max(cl, _fro(dilation.clone_via_dilation(d, rho, dil) - finite.cloning_map(d, rho)))
        ext = max(ext, _fro(dil.evolve(rho) - iso.dilate(rho)))
    fams = dilation.all_families(d)
    gram = np.block([[dagger(f.matrix) @ g.matrix for g in fams] for f in fams])
    out = {
        "unitarity": dil.unitarity_residual(),
        "family_orthonormality": _fro(gram - np.eye(gram.shape[0])),
        "ancilla_norm": abs(np.linalg.norm(dil.phi) - 1),
        "transpose_agreement": tr,
        "clone_agreement": cl,
        "extends_isometry": ext,
    }
    if d == 2:
        out["golden_unitary"] = 0.0 if dilation.matches_qubit_reference(dil) else 1.0
        out["golden_ancilla"] = float(np.max(np.abs(dil.phi - dilation.QUBIT_ANCILLA)))
    return out


def cv_checks(cutoff: int) -> dict:
    N = cutoff
    v = cv.beam_splitter(N)
    out = {
        "beam_splitter_unitarity": _fro(dagger(v) @ v - np.eye(N * N)),
        "beam_splitter_number": _fro(v @ cv.two_mode_number(N) - cv.two_mode_number(N) @ v),
    }
    seeds = {
        "vacuum": cv.vacuum_seed(N),
        "coherent": cv.coherent_seed(0.2, N),
        "squeezed": cv.squeezed_seed(0.2, N),
    }
    for name, seed in seeds.items():
        m = cv.optimal_chi(seed, bs=v)
        red = cv.reduced_seed_operator(seed, v)
        out[f"{name}_fidelity_identity"] = abs(cv.cv_fidelity(seed, m) - m.lambda_max / 2)
        out[f"{name}_chi_eigen"] = _fro(red @ m.chi - m.lambda_max * m.chi)
    out["vacuum_fidelity"] = abs(cv.optimal_chi(seeds["vacuum"], bs=v).fidelity - 0.5)
    return out


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ANTIMAP_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(dims=range(1, 7), cutoff: int = 15, samples: int = 20, rng_seed: int = 0) -> dict:
    """All checks, as ``{name: residual}`` sorted by name."""
    jobs = {}
    for d in dims:
        jobs[f"linalg.d{d}"] = partial(linalg_checks, d, rng_seed)
        jobs[f"channels.d{d}"] = partial(channel_checks, d, samples, rng_seed)
        jobs[f"finite.d{d}"] = partial(finite_checks, d, samples, rng_seed)
        if d >= 2:
            jobs[f"dilation.d{d}"] = partial(dilation_checks, d, samples, rng_seed)
    jobs[f"cv.N{cutoff}"] = partial(cv_checks, cutoff)

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        futures = {name: pool.submit(fn) for name, fn in jobs.items()}
        results = {name: f.result() for name, f in futures.items()}

    flat = {}
    for prefix, checks in results.items():
        for name, value in checks.items():
            flat[f"{prefix}.{name}"] = float(value)
    return dict(sorted(flat.items()))
