import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpbohm import (
    DensityOperator,
    DimMismatch,
    NonHermitian,
    Observable,
    SpectralDecomposition,
    StateVector,
    inner,
    projector_onto,
    spectral_decompose,
    tensor,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def random_state(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v / np.linalg.norm(v))


def random_hermitian(rng, dim):
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable((m + m.conj().T) / 2)


class TestStateVector:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            StateVector(np.array([1.0, 1.0]))

    def test_normalized_constructor(self):
        s = StateVector.normalized([3.0, 4.0])
        assert np.allclose(s.amplitudes, [0.6, 0.8])

    def test_json_round_trip(self):
        s = StateVector.normalized([1.0, 2.0j, -1.0])
        back = StateVector.from_json_dict(s.to_json_dict())
        assert np.allclose(back.amplitudes, s.amplitudes)

    def test_amplitudes_are_read_only(self):
        s = StateVector.basis_state(3, 0)
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0.0


class TestObservable:
    def test_rejects_non_hermitian(self):
        with pytest.raises(NonHermitian):
            Observable(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_json_round_trip(self):
        a = Observable(np.array([[1, 1j], [-1j, 2]], dtype=complex))
        back = Observable.from_json_dict(a.to_json_dict())
        assert np.allclose(back.matrix, a.matrix)


class TestDensityOperator:
    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            DensityOperator(np.eye(2, dtype=complex))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            DensityOperator(np.diag([1.5, -0.5]).astype(complex))

    def test_pure_state(self):
        rho = DensityOperator.pure(StateVector.normalized([1.0, 1.0]))
        assert np.allclose(rho.matrix, 0.5 * np.ones((2, 2)))


class TestSpectralDecompose:
    def test_diagonal_sigma_z(self):
        d = spectral_decompose(Observable(SZ))
        assert np.allclose(d.eigenvalues, [-1.0, 1.0])
        assert np.allclose(d.projectors[0], np.diag([0.0, 1.0]))
        assert np.allclose(d.projectors[1], np.diag([1.0, 0.0]))

    def test_identity_fully_degenerate(self):
        d = spectral_decompose(Observable(np.eye(3, dtype=complex)))
        assert d.n_outcomes == 1
        assert np.allclose(d.eigenvalues, [1.0])
        assert np.allclose(d.projectors[0], np.eye(3))

    def test_sigma_x(self):
        d = spectral_decompose(Observable(SX))
        assert np.allclose(d.eigenvalues, [-1.0, 1.0])
        for p, sign in zip(d.projectors, (-1.0, 1.0)):
            assert np.max(np.abs(p @ p - p)) < 1e-12
            assert np.allclose(p, (np.eye(2) + sign * SX) / 2, atol=1e-12)
        rebuilt = sum(a * p for a, p in zip(d.eigenvalues, d.projectors))
        assert np.max(np.abs(rebuilt - SX)) < 1e-12

    def test_near_degenerate_merge(self):
        a = Observable(np.diag([1.0, 1.0 + 1e-12, 2.0]).astype(complex))
        d = spectral_decompose(a)
        assert d.n_outcomes == 2
        assert np.allclose(np.trace(d.projectors[0]), 2.0)

    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_random_reconstruction_and_completeness(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(10):
            a = random_hermitian(rng, dim)
            d = spectral_decompose(a)
            rebuilt = sum(v * p for v, p in zip(d.eigenvalues, d.projectors))
            assert np.max(np.abs(rebuilt - a.matrix)) < 1e-9
            assert np.max(np.abs(sum(d.projectors) - np.eye(dim))) < 1e-10

    def test_invalid_decomposition_rejected(self):
        with pytest.raises(ValueError):
            SpectralDecomposition(np.array([0.0, 1.0]), (np.eye(2), np.eye(2)))


class TestProjectorOnto:
    def test_basis_state(self):
        p = projector_onto(StateVector.basis_state(2, 0))
        assert np.allclose(p, np.diag([1.0, 0.0]))

    def test_plus_state(self):
        p = projector_onto(StateVector.normalized([1.0, 1.0]))
        assert np.allclose(p, 0.5 * np.ones((2, 2)))

    def test_complex_phase(self):
        p = projector_onto(StateVector.normalized([1.0, 1.0j]))
        assert np.allclose(p, 0.5 * np.array([[1, -1j], [1j, 1]]))


class TestTensor:
    def test_basis_states(self):
        t = tensor(StateVector.basis_state(2, 0), StateVector.basis_state(2, 1))
        assert np.allclose(t.amplitudes, [0, 1, 0, 0])

    def test_identity(self):
        t = tensor(Observable(np.eye(2, dtype=complex)), Observable(np.eye(2, dtype=complex)))
        assert np.allclose(t.matrix, np.eye(4))

    def test_sigma_z_pair(self):
        t = tensor(Observable(SZ), Observable(SZ))
        assert np.allclose(t.matrix, np.diag([1.0, -1.0, -1.0, 1.0]))

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor(StateVector.basis_state(2, 0), Observable(SZ))

    def test_associativity(self):
        rng = np.random.default_rng(5)
        x, y, z = (random_state(rng, d) for d in (2, 3, 2))
        left = tensor(tensor(x, y), z)
        right = tensor(x, tensor(y, z))
        assert left.dim == 12
        assert np.max(np.abs(left.amplitudes - right.amplitudes)) < 1e-12


class TestInner:
    def test_orthonormal_basis(self):
        e0 = StateVector.basis_state(2, 0)
        e1 = StateVector.basis_state(2, 1)
        assert inner(e0, e0) == 1.0
        assert inner(e0, e1) == 0.0

    def test_complex_pair(self):
        plus_x = StateVector.normalized([1.0, 1.0])
        plus_y = StateVector.normalized([1.0, 1.0j])
        assert abs(inner(plus_y, plus_x) - (1 - 1j) / 2) < 1e-15

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            inner(StateVector.basis_state(2, 0), StateVector.basis_state(3, 0))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=10**6))
    def test_conjugate_symmetry(self, dim, seed):
        rng = np.random.default_rng(seed)
        phi, psi = random_state(rng, dim), random_state(rng, dim)
        assert abs(inner(phi, psi) - np.conj(inner(psi, phi))) < 1e-15
