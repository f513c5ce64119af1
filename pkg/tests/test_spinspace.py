import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nphase.exceptions import InvalidStateError
from nphase.knowledge import phase_distribution
from nphase.spinspace import (
    FOUR_LEVEL,
    DensityMatrix,
    SpinBasis,
    coherent_amplitude,
    coherent_amplitudes,
    make_pure,
    phase_kernel,
)
from tests.oracles import kernel_entry_by_quadrature


def test_four_level_basis():
    assert FOUR_LEVEL.dim == 4
    assert list(FOUR_LEVEL.m_values) == [-1.5, -0.5, 0.5, 1.5]
    assert FOUR_LEVEL.level_map == ("F=2", "F=3", "F=3'", "F=4'")
    assert FOUR_LEVEL.index("F=3'") == 2


@pytest.mark.parametrize("j", [0.5, 1.0, 2.5, 3.5])
def test_spin_basis_any_j(j):
    basis = SpinBasis(j, tuple(f"L{k}" for k in range(round(2 * j + 1))))
    assert basis.dim == 2 * j + 1


@pytest.mark.parametrize("j", [0, 0.3, -1.5])
def test_spin_basis_rejects_bad_j(j):
    with pytest.raises(ValueError):
        SpinBasis(j, ("a", "b"))


def test_spin_basis_rejects_duplicate_labels():
    with pytest.raises(ValueError):
        SpinBasis(0.5, ("a", "a"))


class TestCoherentAmplitude:
    def test_spin_half_up_at_pi(self):
        assert coherent_amplitude(0.5, 0.5, math.pi, 0.0) == pytest.approx(1 + 0j, abs=1e-15)

    def test_lowest_level_at_north_pole(self):
        for phi in (0.0, 1.3, 5.0):
            assert coherent_amplitude(1.5, -1.5, 0.0, phi) == pytest.approx(1 + 0j, abs=1e-15)

    def test_normalized(self):
        amps = coherent_amplitudes(1.5, 1.1, 2.2)
        assert np.sum(np.abs(amps) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_phase_factor_sign(self):
        # <theta,phi|j,m> carries exp(+i (j+m) phi)
        a = coherent_amplitude(1.5, 0.5, 1.0, 0.3)
        assert np.angle(a) == pytest.approx(2 * 0.3)

    @pytest.mark.parametrize("m", [2.5, -2.5, 0.0, 0.2])
    def test_rejects_bad_m(self, m):
        with pytest.raises(ValueError):
            coherent_amplitude(1.5, m, 1.0, 0.0)

    @pytest.mark.parametrize("theta", [-0.1, math.pi + 1e-6])
    def test_rejects_bad_theta(self, theta):
        with pytest.raises(ValueError):
            coherent_amplitude(1.5, 0.5, theta, 0.0)

    @settings(max_examples=100, deadline=None)
    @given(theta=st.floats(0, math.pi), phi=st.floats(-10, 10),
           tj=st.integers(1, 7))
    def test_unit_norm_property(self, theta, phi, tj):
        amps = coherent_amplitudes(tj / 2, theta, phi)
        assert np.sum(np.abs(amps) ** 2) == pytest.approx(1.0, abs=1e-12)


class TestPhaseKernel:
    def test_spin_half_off_diagonal(self):
        K = phase_kernel(0.5).K
        assert K[1, 0] == pytest.approx(math.pi / 4, abs=1e-14)
        assert kernel_entry_by_quadrature(0.5, 1, 0) == pytest.approx(math.pi / 4, abs=1e-10)

    def test_spin_three_halves_entry(self):
        # K_{-1/2,-3/2} = sqrt(3) * 2 B(3/2, 7/2)
        expected = 5 * math.sqrt(3) * math.pi / 64
        K = phase_kernel(1.5).K
        assert K[1, 0] == pytest.approx(expected, abs=1e-14)
        assert kernel_entry_by_quadrature(1.5, 1, 0) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize("tj", range(1, 8))
    def test_matches_quadrature(self, tj):
        j = tj / 2
        K = phase_kernel(j).K
        for a in range(tj + 1):
            for b in range(tj + 1):
                assert K[a, b] == pytest.approx(kernel_entry_by_quadrature(j, a, b), abs=1e-10)

    @pytest.mark.parametrize("tj", range(1, 8))
    def test_symmetric_positive(self, tj):
        K = phase_kernel(tj / 2).K
        assert np.array_equal(K, K.T)
        assert np.all(K > 0)

    @pytest.mark.parametrize("tj", range(1, 16))
    def test_diagonal_closure(self, tj):
        # a Dicke state contributes exactly 1/(2 pi) to P(phi)
        kern = phase_kernel(tj / 2)
        d = tj + 1
        for a in range(d):
            assert d * kern.K[a, a] / (4 * math.pi) == pytest.approx(1 / (2 * math.pi), rel=1e-12)

    def test_large_j_no_overflow(self):
        K = phase_kernel(60.5).K
        assert np.all(np.isfinite(K)) and np.all(K > 0)

    def test_cached(self):
        assert phase_kernel(1.5).K is phase_kernel(1.5).K

    @pytest.mark.parametrize("tj", [1, 3, 5])
    def test_diagonal_states_flat(self, tj, rng):
        d = tj + 1
        phi = np.linspace(0, 2 * np.pi, 101)
        for _ in range(10):
            rho = DensityMatrix(np.diag(rng.dirichlet(np.ones(d))))
            P = phase_distribution(rho, phase_kernel(tj / 2))
            assert np.max(np.abs(P(phi) - 1 / (2 * np.pi))) <= 1e-12

    def test_kernel_is_read_only(self):
        with pytest.raises(ValueError):
            phase_kernel(1.5).K[0, 0] = 1.0


class TestMakePure:
    def test_basis_vector(self):
        rho = make_pure([1, 0, 0, 0])
        expected = np.zeros((4, 4))
        expected[0, 0] = 1
        np.testing.assert_array_equal(rho.data, expected)

    def test_equal_superposition(self):
        rho = make_pure([1, 1, 0, 0])
        expected = np.zeros((4, 4))
        expected[:2, :2] = 0.5
        np.testing.assert_allclose(rho.data, expected, atol=1e-15)

    def test_normalizes(self):
        np.testing.assert_array_equal(make_pure([2, 0, 0, 0]).data, make_pure([1, 0, 0, 0]).data)

    def test_zero_rejected(self):
        with pytest.raises(InvalidStateError):
            make_pure([0, 0, 0, 0])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                    min_size=4, max_size=4).filter(lambda v: np.linalg.norm(v) > 1e-3))
    def test_invariants(self, amps):
        rho = make_pure(amps)
        data = rho.data
        assert np.array_equal(data, data.conj().T)
        assert abs(np.trace(data).real - 1) <= 1e-12
        assert np.linalg.eigvalsh(data)[0] >= -1e-10
        assert np.linalg.matrix_rank(data, tol=1e-9) == 1


class TestDensityMatrix:
    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix([[0.5, 0.1], [0.0, 0.5]])

    def test_rejects_bad_trace(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.eye(4) / 3)

    def test_rejects_negative(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([1.2, -0.2]))

    def test_rejects_non_square(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.ones((2, 3)))

    def test_exactly_hermitian_after_construction(self):
        rho = np.eye(2) / 2 + np.array([[0, 1e-12 + 0.1j], [0.0 - 0.1j, 0]])
        data = DensityMatrix(rho).data
        assert np.array_equal(data, data.conj().T)

    def test_immutable(self):
        rho = DensityMatrix(np.eye(4) / 4)
        with pytest.raises(ValueError):
            rho.data[0, 0] = 1.0

    def test_array_protocol(self):
        rho = DensityMatrix(np.eye(4) / 4)
        assert np.asarray(rho).shape == (4, 4)
        assert rho.j == 1.5
