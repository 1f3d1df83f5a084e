import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quam.errors import InputError
from quam.hopfield import (capacity_sweep, energy, recall, settle, to_bits,
                           to_spins, train, update_unit)


def complement(bits: str) -> str:
    return "".join("1" if b == "0" else "0" for b in bits)


class TestTrain:

    def test_single_pattern_fixed_point(self):
        net = train(["1011001110"])
        out = recall(net, "1011001110")
        assert out.pattern == "1011001110" and out.converged and out.sweeps == 1

    def test_complement_is_fixed_point(self):
        pat = "110100101101"
        net = train([pat])
        assert recall(net, complement(pat)).pattern == complement(pat)
        assert recall(net, pat).pattern == pat

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(2, 30), m=st.integers(1, 6), seed=st.integers(0, 2 ** 32 - 1))
    def test_weights_symmetric_zero_diagonal(self, n, m, seed):
        pats = np.random.default_rng(seed).choice((-1, 1), size=(m, n))
        w = train(pats).weights
        np.testing.assert_array_equal(w, w.T)
        assert np.all(np.diag(w) == 0)

    def test_hebbian_values(self):
        w = train(["01", "11"]).weights
        # spins (-1, 1) and (1, 1): off-diagonal sum is 0.
        np.testing.assert_array_equal(w, np.zeros((2, 2)))
        w = train(["11", "00"]).weights
        np.testing.assert_array_equal(w, [[0, 1], [1, 0]])

    def test_spin_round_trip(self):
        assert to_bits(to_spins("0110")) == "0110"


class TestRecall:

    def test_probe_length(self):
        with pytest.raises(InputError):
            recall(train(["0101"]), "010")

    def test_one_bit_flip_repaired(self):
        rng = np.random.default_rng(1)
        hits = total = 0
        for trial in range(50):
            pats = ["".join(rng.choice(["0", "1"], size=64)) for _ in range(3)]
            net = train(pats)
            for p in pats:
                i = int(rng.integers(64))
                probe = p[:i] + complement(p[i]) + p[i + 1:]
                hits += recall(net, probe, seed=trial).pattern == p
                total += 1
        assert hits / total >= 0.95

    def test_wildcards_resolved_deterministically(self):
        net = train(["1111000011110000"])
        a = recall(net, "1111????11110000", seed=4)
        b = recall(net, "1111????11110000", seed=4)
        assert a == b
        assert a.pattern == "1111000011110000"

    def test_non_convergence_reported(self):
        # A two-unit network with negative coupling flips forever under
        # synchronous-looking pressure only if max_sweeps is too small.
        net = train(["01", "10"])
        x = np.array([1, 1])
        converged, sweeps = settle(net, x, np.random.default_rng(0), max_sweeps=1)
        assert not converged and sweeps == 1

    def test_exact_probe_at_low_load(self):
        rng = np.random.default_rng(0)
        hits = total = 0
        for trial in range(100):
            pats = ["".join(rng.choice(["0", "1"], size=64)) for _ in range(6)]
            net = train(pats)
            for p in pats:
                hits += recall(net, p, seed=trial).pattern == p
                total += 1
        assert hits / total >= 0.95


class TestEnergy:

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(4, 40), m=st.integers(1, 10), seed=st.integers(0, 2 ** 32 - 1))
    def test_never_increases(self, n, m, seed):
        rng = np.random.default_rng(seed)
        net = train(rng.choice((-1, 1), size=(m, n)))
        x = rng.choice((-1, 1), size=n)
        e = energy(net, x)
        for i in rng.integers(0, n, size=300):
            update_unit(net, x, int(i))
            e_new = energy(net, x)
            assert e_new <= e + 1e-12
            e = e_new


class TestCapacity:

    def test_n16_curve(self):
        table = dict(capacity_sweep(16, range(1, 9), trials=100, seed=0))
        assert table[2] >= 0.9
        assert min(table[m] for m in range(5, 9)) < 0.5
        vals = [table[m] for m in range(1, 9)]
        assert all(b <= a for a, b in zip(vals, vals[1:]))

    def test_n100_m5(self):
        assert dict(capacity_sweep(100, [5], trials=20, seed=0))[5] >= 0.99

    def test_deterministic(self):
        assert capacity_sweep(16, [3, 6], 10, seed=5) == capacity_sweep(16, [3, 6], 10, seed=5)

    @pytest.mark.parametrize("m_values,trials", [([0, 2], 10), ([], 10), ([2], 0)])
    def test_rejects(self, m_values, trials):
        with pytest.raises(InputError):
            capacity_sweep(16, m_values, trials)
