"""Named operators: Walsh-Hadamard, phase oracles, inversion about the mean,
the storage rotation, and the conditional flips used by the storage circuit."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from quam.errors import InputError
from quam.state import QuantumState, apply_controlled_1q

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)

# Conditional NOTs on (control, target), basis order |00>,|01>,|10>,|11>.
F0 = np.array([[0, 1, 0, 0],
               [1, 0, 0, 0],
               [0, 0, 1, 0],
               [0, 0, 0, 1]], dtype=np.complex128)
F1 = np.array([[1, 0, 0, 0],
               [0, 1, 0, 0],
               [0, 0, 0, 1],
               [0, 0, 1, 0]], dtype=np.complex128)


def hadamard() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def and_flip(a: int, b: int) -> np.ndarray:
    """8x8 gate flipping the third qubit iff the first two read ``ab``."""
    if a not in (0, 1) or b not in (0, 1):
        raise InputError("control pattern bits must be 0 or 1")
    g = np.eye(8, dtype=np.complex128)
    base = 4 * a + 2 * b
    g[[base, base + 1]] = g[[base + 1, base]]
    return g


def walsh_all(state: QuantumState) -> QuantumState:
    """Apply the Hadamard gate to every qubit."""
    h = hadamard()
    for q in range(state.n):
        apply_controlled_1q(state, h, q)
    return state


def as_marks(marks: Iterable[int] | np.ndarray, dim: int) -> np.ndarray:
    idx = np.unique(np.asarray(list(marks) if not isinstance(marks, np.ndarray)
                               else marks, dtype=np.int64))
    if idx.size and (idx[0] < 0 or idx[-1] >= dim):
        raise InputError(f"mark index out of range for dimension {dim}")
    return idx


def phase_invert(state: QuantumState, marks: Iterable[int] | np.ndarray) -> QuantumState:
    """Negate the amplitude of every basis index in ``marks``."""
    idx = as_marks(marks, state.dim)
    state.amplitudes[idx] *= -1.0
    return state


def invert_about_mean(state: QuantumState) -> QuantumState:
    """Reflect every amplitude through the mean amplitude: ``c -> 2*mean - c``.

    This is the Grover diffusion step, equal to ``-W I_0 W`` with ``I_0``
    flipping only ``|0...0>``.
    """
    amps = state.amplitudes
    mean = np.sum(amps) / amps.size
    np.subtract(2.0 * mean, amps, out=amps)
    return state


def s_matrix(p: int) -> np.ndarray:
    """Storage rotation for the ``p``-th remaining pattern, on the c register.

    Fixes ``|00>`` and ``|01>`` and rotates ``|10>`` into
    ``sqrt((p-1)/p)|10> + (1/sqrt(p))|11>``.
    """
    if int(p) != p or p < 1:
        raise InputError(f"p must be an integer >= 1, got {p}")
    big = np.sqrt((p - 1) / p)
    small = 1.0 / np.sqrt(p)
    return np.array([[1, 0, 0, 0],
                     [0, 1, 0, 0],
                     [0, 0, big, -small],
                     [0, 0, small, big]], dtype=np.complex128)


def diffusion_matrix(n: int) -> np.ndarray:
    """Dense matrix of :func:`invert_about_mean` (small ``n`` only)."""
    dim = 2 ** n
    return 2.0 / dim * np.ones((dim, dim), dtype=np.complex128) - np.eye(dim)


def walsh_matrix(n: int) -> np.ndarray:
    w = np.array([[1.0]], dtype=np.complex128)
    for _ in range(n):
        w = np.kron(w, hadamard())
    return w


def oracle_matrix(n: int, marks: Iterable[int]) -> np.ndarray:
    d = np.ones(2 ** n, dtype=np.complex128)
    d[as_marks(marks, 2 ** n)] = -1.0
    return np.diag(d)
