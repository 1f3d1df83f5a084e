import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quam.errors import InputError
from quam.gates import (F0, F1, and_flip, diffusion_matrix, hadamard,
                        invert_about_mean, oracle_matrix, phase_invert,
                        s_matrix, walsh_all, walsh_matrix)
from quam.state import QuantumState, apply_controlled_1q, new_basis_state

from oracles import controlled_1q_matrix, frac_diffuse, frac_flip, frac_mean, kron_all

ROOT6 = math.sqrt(6)


def unitary_error(g):
    return np.max(np.abs(g.conj().T @ g - np.eye(g.shape[0])))


class TestHadamard:

    def test_on_zero(self):
        s = apply_controlled_1q(new_basis_state(1, "0"), hadamard(), 0)
        np.testing.assert_allclose(s.amplitudes, [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_interference_example(self):
        s = QuantumState(1, np.array([2, 1]) / math.sqrt(5))
        apply_controlled_1q(s, hadamard(), 0)
        np.testing.assert_allclose(s.amplitudes, np.array([3, 1]) / math.sqrt(10), atol=1e-12)

    def test_involution(self):
        h = hadamard()
        np.testing.assert_allclose(h @ h, np.eye(2), atol=1e-12)


class TestWalsh:

    def test_uniform_sixteen(self):
        s = walsh_all(new_basis_state(4, "0000"))
        np.testing.assert_allclose(s.amplitudes, np.full(16, 0.25), atol=1e-15)

    def test_single_qubit_one(self):
        s = walsh_all(new_basis_state(1, "1"))
        np.testing.assert_allclose(s.amplitudes, np.array([1, -1]) / math.sqrt(2), atol=1e-15)

    def test_twice_is_identity(self, rng):
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        s = QuantumState(3, v / np.linalg.norm(v))
        before = s.amplitudes.copy()
        walsh_all(walsh_all(s))
        np.testing.assert_allclose(s.amplitudes, before, atol=1e-12)

    def test_matches_kronecker_product(self, rng):
        v = rng.normal(size=16) + 0j
        s = QuantumState(4, v / np.linalg.norm(v))
        expected = kron_all([hadamard()] * 4) @ s.amplitudes
        np.testing.assert_allclose(walsh_all(s).amplitudes, expected, atol=1e-12)


class TestPhaseInvert:

    def test_marks_target(self):
        s = phase_invert(QuantumState(4, np.full(16, 0.25)), [6])
        expected = np.full(16, 0.25)
        expected[6] = -0.25
        np.testing.assert_array_equal(s.amplitudes, expected)

    def test_empty_is_identity(self):
        s = phase_invert(QuantumState(2, np.full(4, 0.5)), [])
        np.testing.assert_array_equal(s.amplitudes, np.full(4, 0.5))

    def test_stored_or_query_marks_on_worked_example(self):
        # State after the first diffusion of the worked recall example.
        start = np.array([-1, 1, 1, -1, 1, 1, 3, 1, 1, -1, 1, 1, -1, 1, 1, -1]) / (2 * ROOT6)
        s = phase_invert(QuantumState(4, start), {0, 3, 6, 7, 9, 12, 15})
        expected = np.array([1, 1, 1, 1, 1, 1, -3, -1, 1, 1, 1, 1, 1, 1, 1, 1]) / (2 * ROOT6)
        np.testing.assert_allclose(s.amplitudes, expected, atol=1e-12)

    def test_out_of_range(self):
        with pytest.raises(InputError):
            phase_invert(new_basis_state(2, "00"), [4])


class TestInvertAboutMean:

    def test_uniform_unchanged(self):
        s = invert_about_mean(QuantumState(3, np.full(8, 1 / math.sqrt(8))))
        np.testing.assert_allclose(s.amplitudes, np.full(8, 1 / math.sqrt(8)), atol=1e-15)

    def test_first_grover_step(self):
        vec = [Fraction(1, 4)] * 16
        vec[6] = Fraction(-1, 4)
        assert frac_mean(vec) == Fraction(7, 32)
        exact = frac_diffuse(vec)
        assert exact == [Fraction(3, 16)] * 6 + [Fraction(11, 16)] + [Fraction(3, 16)] * 9
        s = invert_about_mean(QuantumState(4, np.array(vec, dtype=float)))
        np.testing.assert_allclose(s.amplitudes, np.array(exact, dtype=float), atol=1e-12)

    def test_six_pattern_trace_steps(self):
        # Amplitudes in units of 1/sqrt(6).
        vec = [Fraction(int(c)) for c in "1001001001001001"]
        steps = [("flip", [6]), ("diffuse", None), ("flip", [6]), ("diffuse", None)]
        s = QuantumState(4, np.array(vec, dtype=float) / ROOT6)
        for kind, arg in steps:
            if kind == "flip":
                vec = frac_flip(vec, arg)
                phase_invert(s, arg)
            else:
                vec = frac_diffuse(vec)
                invert_about_mean(s)
            np.testing.assert_allclose(s.amplitudes, np.array(vec, dtype=float) / ROOT6,
                                       atol=1e-12)
        expected = np.array([5, -3, -3, 5, -3, -3, 13, -3, -3, 5, -3, -3, 5, -3, -3, 5]) / 8
        np.testing.assert_allclose(np.array(vec, dtype=float), expected, atol=0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_diffusion_identity(self, n):
        w = kron_all([hadamard()] * n)
        flip_zero = np.eye(2 ** n)
        flip_zero[0, 0] = -1
        np.testing.assert_allclose(diffusion_matrix(n), -w @ flip_zero @ w, atol=1e-12)
        # Column-by-column application matches the same matrix.
        cols = []
        for i in range(2 ** n):
            s = QuantumState(n, np.eye(2 ** n)[i])
            cols.append(invert_about_mean(s).amplitudes)
        np.testing.assert_allclose(np.array(cols).T, -w @ flip_zero @ w, atol=1e-12)


class TestStorageMatrix:

    def test_p1_moves_generator_to_saved(self):
        np.testing.assert_allclose(s_matrix(1) @ [0, 0, 1, 0], [0, 0, 0, 1], atol=0)

    def test_p3_split(self):
        np.testing.assert_allclose(s_matrix(3) @ [0, 0, 1, 0],
                                   [0, 0, math.sqrt(2 / 3), 1 / math.sqrt(3)], atol=1e-15)

    @pytest.mark.parametrize("p", [1, 2, 7, 1000])
    def test_upper_block_fixed(self, p):
        np.testing.assert_array_equal(s_matrix(p)[:, :2], np.eye(4)[:, :2])

    @pytest.mark.parametrize("p", [1, 2, 3, 10, 1234, 10 ** 6])
    def test_unitary(self, p):
        assert unitary_error(s_matrix(p)) < 1e-12

    def test_rejects_zero(self):
        with pytest.raises(InputError):
            s_matrix(0)


class TestConditionalFlips:

    def test_f0_f1_match_controlled_x(self):
        x = np.array([[0, 1], [1, 0]])
        np.testing.assert_array_equal(F0, controlled_1q_matrix(2, x, 1, [(0, 0)]))
        np.testing.assert_array_equal(F1, controlled_1q_matrix(2, x, 1, [(0, 1)]))

    @pytest.mark.parametrize("a,b", [(0, 0), (0, 1), (1, 0), (1, 1)])
    def test_and_flips(self, a, b):
        x = np.array([[0, 1], [1, 0]])
        np.testing.assert_array_equal(and_flip(a, b),
                                      controlled_1q_matrix(3, x, 2, [(0, a), (1, b)]))

    def test_all_unitary(self):
        for g in [hadamard(), F0, F1, *(and_flip(a, b) for a in (0, 1) for b in (0, 1))]:
            assert unitary_error(g) < 1e-12


def test_dense_helpers_agree():
    np.testing.assert_allclose(walsh_matrix(3), kron_all([hadamard()] * 3), atol=1e-15)
    assert np.diag(oracle_matrix(2, [1, 3])).real.tolist() == [1, -1, 1, -1]


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 6), seed=st.integers(0, 2 ** 32 - 1), data=st.data())
def test_oracle_and_diffusion_are_norm_preserving_involutions(n, seed, data):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    s = QuantumState(n, v / np.linalg.norm(v))
    before = s.amplitudes.copy()
    marks = data.draw(st.sets(st.integers(0, 2 ** n - 1)))
    phase_invert(s, marks)
    assert abs(s.norm_squared() - 1) < 1e-10
    phase_invert(s, marks)
    np.testing.assert_allclose(s.amplitudes, before, atol=1e-15)
    invert_about_mean(s)
    assert abs(s.norm_squared() - 1) < 1e-10
    invert_about_mean(s)
    np.testing.assert_allclose(s.amplitudes, before, atol=1e-12)
