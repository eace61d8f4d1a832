import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from antimap.linalg import (
    NotHermitianError,
    dket,
    haar_random_state,
    haar_random_unitary,
    herm_eig,
    kron,
    matrix_exp,
    partial_trace,
    swap_operator,
    sym_antisym_projectors,
    trace_out,
    undket,
)
from conftest import random_matrix


def kron_loops(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def taylor_expm(m, order=40):
    # scaling and squaring around a plain truncated Taylor series
    s = max(0, int(np.ceil(np.log2(max(np.linalg.norm(m, 1), 1e-300)))) + 1)
    x = m / 2**s
    term = np.eye(m.shape[0], dtype=complex)
    total = term.copy()
    for k in range(1, order + 1):
        term = term @ x / k
        total = total + term
    for _ in range(s):
        total = total @ total
    return total


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_diagonal(self):
        assert np.array_equal(kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))

    def test_against_loops(self, rng):
        a, b = random_matrix(2, 2, rng), random_matrix(2, 2, rng)
        assert np.allclose(kron(a, b), kron_loops(a, b), atol=1e-15)

    def test_rectangular(self, rng):
        a, b = random_matrix(2, 3, rng), random_matrix(4, 1, rng)
        assert np.allclose(kron(a, b), kron_loops(a, b), atol=1e-15)


class TestPartialTrace:
    def test_second_identity(self, rng):
        a, b = random_matrix(3, 3, rng), random_matrix(3, 3, rng)
        m = np.outer(dket(a), dket(b).conj())
        assert np.allclose(partial_trace(m, 3, 3, "second"), a @ b.conj().T, atol=1e-12)

    def test_first_identity(self, rng):
        a, b = random_matrix(3, 3, rng), random_matrix(3, 3, rng)
        m = np.outer(dket(a), dket(b).conj())
        assert np.allclose(partial_trace(m, 3, 3, "first"), a.T @ b.conj(), atol=1e-12)

    def test_identity(self):
        assert np.allclose(partial_trace(np.eye(9), 3, 3, "first"), 3 * np.eye(3))

    def test_product(self, rng):
        a, b = random_matrix(2, 2, rng), random_matrix(3, 3, rng)
        assert np.allclose(partial_trace(np.kron(a, b), 2, 3, "first"), np.trace(a) * b)
        assert np.allclose(partial_trace(np.kron(a, b), 2, 3, "second"), np.trace(b) * a)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(5), 2, 3)

    def test_bad_which(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4), 2, 2, "third")

    def test_trace_out_three_systems(self, rng):
        a, b, c = (random_matrix(d, d, rng) for d in (2, 3, 2))
        m = np.kron(np.kron(a, b), c)
        assert np.allclose(trace_out(m, [2, 3, 2], [1]), np.trace(b) * np.kron(a, c))
        assert np.allclose(trace_out(m, [2, 3, 2], [0, 2]), np.trace(a) * np.trace(c) * b)
        assert np.allclose(trace_out(m, [2, 3, 2], [0, 1, 2]), np.trace(m))

    @settings(max_examples=40, deadline=None)
    @given(d1=st.integers(1, 4), d2=st.integers(1, 4), seed=st.integers(0, 2**32 - 1))
    def test_trace_preserving_and_linear(self, d1, d2, seed):
        rng = np.random.default_rng(seed)
        m1, m2 = random_matrix(d1 * d2, d1 * d2, rng), random_matrix(d1 * d2, d1 * d2, rng)
        for which in ("first", "second"):
            assert abs(np.trace(partial_trace(m1, d1, d2, which)) - np.trace(m1)) <= 1e-12 * max(1, np.abs(m1).sum())
            lin = partial_trace(2 * m1 - 3j * m2, d1, d2, which)
            ref = 2 * partial_trace(m1, d1, d2, which) - 3j * partial_trace(m2, d1, d2, which)
            assert np.allclose(lin, ref, atol=1e-12)


class TestDket:
    def test_identity(self):
        assert np.array_equal(dket(np.eye(2)), [1, 0, 0, 1])

    def test_matrix_unit(self):
        unit = np.zeros((2, 2))
        unit[0, 1] = 1
        assert np.array_equal(dket(unit), [0, 1, 0, 0])

    def test_operator_identity(self, rng):
        a, b, c = (random_matrix(2, 2, rng) for _ in range(3))
        assert np.allclose(np.kron(a, c) @ dket(b), dket(a @ b @ c.T), atol=1e-12)

    @pytest.mark.parametrize("d", range(1, 9))
    def test_round_trip(self, d, rng):
        a = random_matrix(d, d, rng)
        assert np.array_equal(undket(dket(a), d, d), a)

    def test_rectangular_round_trip(self, rng):
        a = random_matrix(3, 5, rng)
        assert np.array_equal(undket(dket(a), 3, 5), a)
        with pytest.raises(ValueError):
            undket(dket(a), 4, 4)


class TestSwap:
    def test_qubit(self):
        perm = np.eye(4)[[0, 2, 1, 3]]
        assert np.array_equal(swap_operator(2), perm)

    def test_on_dket_by_matrix_units(self):
        d = 3
        e = swap_operator(d)
        for i in range(d):
            for j in range(d):
                unit = np.zeros((d, d))
                unit[i, j] = 1
                assert np.array_equal(e @ dket(unit), dket(unit.T))

    def test_on_dket_random(self, rng):
        a = random_matrix(4, 4, rng)
        assert np.allclose(swap_operator(4) @ dket(a), dket(a.T))

    @pytest.mark.parametrize("d", range(1, 9))
    def test_trace(self, d):
        e = swap_operator(d)
        by_pairs = sum(e[i * d + j, i * d + j] for i in range(d) for j in range(d))
        assert by_pairs == d
        assert np.trace(e) == d

    def test_factorized_vectors(self, rng):
        phi, psi = random_matrix(3, 1, rng).ravel(), random_matrix(3, 1, rng).ravel()
        assert np.allclose(swap_operator(3) @ np.kron(phi, psi), np.kron(psi, phi))

    @pytest.mark.parametrize("d", range(1, 9))
    def test_algebra(self, d):
        e = swap_operator(d)
        p_sym, p_anti = sym_antisym_projectors(d)
        ident = np.eye(d * d)
        assert np.abs(e @ e - ident).max() <= 1e-12
        assert np.abs(e - e.conj().T).max() <= 1e-12
        assert np.abs(p_sym @ p_sym - p_sym).max() <= 1e-12
        assert np.abs(p_anti @ p_anti - p_anti).max() <= 1e-12
        assert np.abs(p_sym @ p_anti).max() <= 1e-12
        assert np.abs(p_sym + p_anti - ident).max() <= 1e-12


class TestProjectors:
    @pytest.mark.parametrize("d", range(1, 7))
    def test_traces(self, d):
        p_sym, p_anti = sym_antisym_projectors(d)
        # Tr[(I +/- E)/2] = (d^2 +/- d)/2
        assert np.trace(p_sym).real == pytest.approx(d * (d + 1) / 2)
        assert np.trace(p_anti).real == pytest.approx(d * (d - 1) / 2)

    def test_qubit_values(self):
        p_sym, p_anti = sym_antisym_projectors(2)
        assert np.trace(p_sym).real == 3
        assert np.trace(p_anti).real == 1

    def test_scalar_case(self):
        _, p_anti = sym_antisym_projectors(1)
        assert p_anti.shape == (1, 1) and p_anti[0, 0] == 0


class TestHaar:
    def test_scalar(self):
        assert np.array_equal(haar_random_state(1, 0), [[1]])

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_valid_pure_state(self, d):
        for seed in range(20):
            rho = haar_random_state(d, seed)
            assert np.allclose(rho, rho.conj().T)
            assert np.trace(rho).real == pytest.approx(1)
            assert np.trace(rho @ rho).real == pytest.approx(1)
            assert np.linalg.eigvalsh(rho)[0] >= -1e-12

    def test_first_moment(self):
        d, n = 3, 20000
        rng = np.random.default_rng(1)
        mean = sum(haar_random_state(d, rng) for _ in range(n)) / n
        # entries fluctuate ~ 1/(d sqrt(n))
        assert np.abs(mean - np.eye(d) / d).max() < 0.01

    def test_conjugation_invariance(self):
        # overlap with a fixed state has the same distribution before and after
        # a fixed rotation: compare the first two moments of <0|rho|0>
        d, n = 3, 20000
        rng = np.random.default_rng(2)
        w = haar_random_unitary(d, np.random.default_rng(99))
        plain, rotated = [], []
        for _ in range(n):
            rho = haar_random_state(d, rng)
            plain.append(rho[0, 0].real)
            rotated.append((w @ rho @ w.conj().T)[0, 0].real)
        plain, rotated = np.array(plain), np.array(rotated)
        # exact moments for d = 3: E = 1/3, E[x^2] = 2/(d(d+1)) = 1/6
        for x in (plain, rotated):
            assert x.mean() == pytest.approx(1 / 3, abs=0.01)
            assert (x**2).mean() == pytest.approx(1 / 6, abs=0.01)

    def test_unitary(self):
        u = haar_random_unitary(5, np.random.default_rng(3))
        assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-12)

    def test_deterministic(self):
        assert np.array_equal(haar_random_state(4, 11), haar_random_state(4, 11))


class TestHermEig:
    def test_diagonal(self):
        spec = herm_eig(np.diag([3.0, 1.0, 2.0]))
        assert np.allclose(spec.eigenvalues, [3, 2, 1])

    def test_swap_spectrum(self):
        lam = sympy.symbols("lam")
        e = sympy.Matrix(swap_operator(2).real.astype(int))
        poly = sympy.factor((e - lam * sympy.eye(4)).det())
        roots = sympy.roots(sympy.Poly(poly, lam))
        expected = sorted((float(r) for r, mult in roots.items() for _ in range(mult)), reverse=True)
        assert expected == [1, 1, 1, -1]
        assert np.allclose(herm_eig(swap_operator(2)).eigenvalues, expected)

    def test_projector_spectrum(self):
        p_sym, _ = sym_antisym_projectors(2)
        assert np.allclose(herm_eig(p_sym).eigenvalues, [1, 1, 1, 0], atol=1e-14)

    def test_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            herm_eig(np.array([[0, 1], [0, 0]]))

    def test_degenerate_subspace(self):
        p_sym, _ = sym_antisym_projectors(3)
        spec = herm_eig(p_sym)
        top = spec.eigenvectors[:, :6]
        # any orthonormal basis of the eigenspace is fine; the projector onto it is unique
        assert np.allclose(top @ top.conj().T, p_sym, atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(d=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
    def test_reconstruction(self, d, seed):
        rng = np.random.default_rng(seed)
        a = random_matrix(d, d, rng)
        m = a + a.conj().T
        spec = herm_eig(m)
        assert np.linalg.norm(m - spec.reconstruct()) <= 1e-10 * np.linalg.norm(m)
        assert np.all(np.diff(spec.eigenvalues) <= 0)
        v = spec.eigenvectors
        assert np.allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
        for k in range(d):
            assert np.allclose(m @ v[:, k], spec.eigenvalues[k] * v[:, k], atol=1e-10 * max(1, np.linalg.norm(m)))


class TestMatrixExp:
    def test_zero(self):
        assert np.array_equal(matrix_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal(self):
        theta = 0.7
        out = matrix_exp(1j * theta * np.diag([1, -1]))
        assert np.allclose(out, np.diag([np.exp(1j * theta), np.exp(-1j * theta)]), atol=1e-15)

    def test_against_taylor(self, rng):
        a = random_matrix(4, 4, rng)
        m = (a - a.conj().T) / 2
        assert np.abs(matrix_exp(m) - taylor_expm(m)).max() <= 1e-10

    def test_non_square(self):
        with pytest.raises(ValueError):
            matrix_exp(np.zeros((2, 3)))

    @settings(max_examples=30, deadline=None)
    @given(d=st.integers(1, 6), scale=st.floats(0, 10), seed=st.integers(0, 2**32 - 1))
    def test_anti_hermitian_is_unitary(self, d, scale, seed):
        rng = np.random.default_rng(seed)
        a = random_matrix(d, d, rng)
        m = a - a.conj().T
        norm = np.linalg.norm(m)
        if norm > 0:
            m = m * (scale / norm)
        u = matrix_exp(m)
        assert np.linalg.norm(u @ u.conj().T - np.eye(d)) <= 1e-9
