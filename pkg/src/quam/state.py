"""Dense state-vector simulation of an n-qubit register.

Indexing convention: qubit 0 is the most significant bit of the basis index,
so the label ``"0110"`` is index 6 and a 4-qubit vector runs
``|0000>, |0001>, ..., |1111>``.

Every mutating function works in place on ``state.amplitudes`` and returns the
same ``QuantumState`` so calls can be chained. A state must not be mutated
from two threads at once; read-only queries are safe between mutations.
Reductions (norms, means, cumulative sums) go through numpy's pairwise
summation over the flat array in index order, so results are reproducible
for a given numpy build.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from quam.errors import InputError
from quam.patterns import Query, as_query, index_to_label, label_to_index

NORM_TOL = 1e-10
UNITARY_TOL = 1e-12
# Fast-path (x register only) and circuit-path (x + c registers) limits.
MAX_QUBITS = 24
MAX_CIRCUIT_PATTERN_BITS = 12

ControlSpec = Sequence[tuple[int, int]]


class QuantumState:
    """Amplitudes of an ``n``-qubit register.

    Attributes:
        n: number of qubits.
        amplitudes: complex128 array of length ``2**n``.
    """

    __slots__ = ("n", "amplitudes")

    def __init__(self, n: int, amplitudes: np.ndarray | Sequence[complex],
                 check_norm: bool = True) -> None:
        if not 1 <= n <= MAX_QUBITS:
            raise InputError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 2 ** n:
            raise InputError(
                f"{n} qubits need {2 ** n} amplitudes, got {amps.size}")
        self.n = n
        self.amplitudes = amps
        if check_norm and abs(self.norm_squared() - 1.0) > NORM_TOL:
            raise InputError(
                f"amplitudes are not normalized (sum |c|^2 = {self.norm_squared()!r})")

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex] | np.ndarray,
                        normalize: bool = False) -> "QuantumState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(amps.size).bit_length() - 1
        if amps.size != 2 ** n:
            raise InputError(f"length {amps.size} is not a power of two")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    def copy(self) -> "QuantumState":
        return QuantumState(self.n, self.amplitudes.copy(), check_norm=False)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def label(self, index: int) -> str:
        return index_to_label(index, self.n)

    def check_normalized(self, tol: float = NORM_TOL) -> None:
        err = abs(self.norm_squared() - 1.0)
        if err > tol:
            raise InputError(f"state is not normalized (|1 - norm| = {err:.3g})")

    def __repr__(self) -> str:
        return f"QuantumState(n={self.n}, amplitudes={self.amplitudes!r})"


def new_basis_state(n: int, label: str) -> QuantumState:
    """Return the computational basis state ``|label>`` on ``n`` qubits."""
    if len(label) != n:
        raise InputError(f"label {label!r} does not have {n} bits")
    amps = np.zeros(2 ** n, dtype=np.complex128)
    amps[label_to_index(label)] = 1.0
    return QuantumState(n, amps, check_norm=False)


def uniform_state(n: int) -> QuantumState:
    amps = np.full(2 ** n, 1.0 / np.sqrt(2 ** n), dtype=np.complex128)
    return QuantumState(n, amps, check_norm=False)


def check_unitary(gate: np.ndarray, dim: int) -> np.ndarray:
    g = np.asarray(gate, dtype=np.complex128)
    if g.shape != (dim, dim):
        raise InputError(f"expected a {dim}x{dim} gate, got shape {g.shape}")
    err = np.max(np.abs(g.conj().T @ g - np.eye(dim)))
    if err > UNITARY_TOL:
        raise InputError(f"gate is not unitary (max |G^H G - I| = {err:.3g})")
    return g


def _check_qubits(state: QuantumState, targets: Sequence[int],
                  controls: ControlSpec) -> None:
    used = list(targets) + [q for q, _ in controls]
    for q in used:
        if not 0 <= q < state.n:
            raise InputError(f"qubit {q} out of range for {state.n} qubits")
    if len(set(used)) != len(used):
        raise InputError(f"qubit indices collide: targets={list(targets)}, "
                         f"controls={[q for q, _ in controls]}")
    for q, bit in controls:
        if bit not in (0, 1):
            raise InputError(f"control value for qubit {q} must be 0 or 1")


def _apply_on_axes(state: QuantumState, gate: np.ndarray, targets: Sequence[int],
                   controls: ControlSpec) -> None:
    # View the vector as an n-dimensional 2x2x...x2 tensor; fixing the control
    # axes selects the controlled subspace as a view, which is updated in place.
    psi = state.amplitudes.reshape((2,) * state.n)
    index: list = [slice(None)] * state.n
    for q, bit in controls:
        index[q] = bit
    sub = psi[tuple(index)]
    controlled = sorted(q for q, _ in controls)
    axes = [t - sum(1 for c in controlled if c < t) for t in targets]
    k = len(targets)
    g = gate.reshape((2,) * (2 * k))
    out = np.tensordot(g, sub, axes=(list(range(k, 2 * k)), axes))
    sub[...] = np.moveaxis(out, list(range(k)), axes)


def apply_controlled_1q(state: QuantumState, gate: np.ndarray, target: int,
                        controls: ControlSpec = ()) -> QuantumState:
    """Apply a 2x2 unitary to ``target`` where every ``(qubit, bit)`` control holds."""
    g = check_unitary(gate, 2)
    _check_qubits(state, [target], controls)
    _apply_on_axes(state, g, [target], controls)
    return state


def apply_2q(state: QuantumState, gate: np.ndarray, qubits: tuple[int, int],
             controls: ControlSpec = ()) -> QuantumState:
    """Apply a 4x4 unitary to the ordered pair ``qubits`` (first = high bit)."""
    g = check_unitary(gate, 4)
    qa, qb = qubits
    _check_qubits(state, [qa, qb], controls)
    _apply_on_axes(state, g, [qa, qb], controls)
    return state


def _matching_mask(n: int, query: Query) -> np.ndarray:
    mask = np.zeros(2 ** n, dtype=bool)
    mask[query.matching_indices()] = True
    return mask


def probability_of(state: QuantumState, query: Query | str) -> float:
    """Total probability of observing any basis state matching ``query``."""
    q = as_query(query)
    if q.n != state.n:
        raise InputError(f"query {q} does not have {state.n} symbols")
    probs = state.probabilities()
    return float(np.sum(probs[_matching_mask(state.n, q)]))


def _cdf(state: QuantumState) -> np.ndarray:
    state.check_normalized()
    cdf = np.cumsum(state.probabilities())
    return cdf / cdf[-1]


def _draw(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1)


def measure_all(state: QuantumState,
                rng: np.random.Generator | int | None = None) -> str:
    """Observe every qubit: return the outcome label and collapse onto it."""
    rng = np.random.default_rng(rng)
    outcome = int(_draw(_cdf(state), rng.random(1))[0])
    state.amplitudes[:] = 0.0
    state.amplitudes[outcome] = 1.0
    return state.label(outcome)


def sample_indices(state: QuantumState, shots: int,
                   rng: np.random.Generator | int | None = None) -> np.ndarray:
    """Draw ``shots`` basis indices by the Born rule without collapsing.

    One uniform variate is consumed per shot, so two calls of ``a`` and ``b``
    shots on a shared generator equal a single call of ``a + b`` shots.
    """
    if shots < 1:
        raise InputError(f"shots must be positive, got {shots}")
    rng = np.random.default_rng(rng)
    return _draw(_cdf(state), rng.random(shots))


def sample(state: QuantumState, shots: int,
           rng: np.random.Generator | int | None = None) -> dict[str, int]:
    """Histogram of ``shots`` non-collapsing observations, keyed by label."""
    idx = sample_indices(state, shots, rng)
    values, counts = np.unique(idx, return_counts=True)
    return {state.label(int(v)): int(c) for v, c in zip(values, counts)}


def merge_histograms(histograms: Iterable[dict[str, int]]) -> dict[str, int]:
    total: dict[str, int] = {}
    for h in histograms:
        for k, v in h.items():
            total[k] = total.get(k, 0) + v
    return dict(sorted(total.items()))
