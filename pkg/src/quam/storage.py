"""Loading a pattern set into a quantum superposition.

Two routes produce the same x-register state:

* :func:`store_fast` writes ``1/sqrt(m)`` directly at each pattern index.
* :func:`store_circuit` runs the FLIP / S^p / SAVE loop over an x register of
  ``n`` qubits followed by a two-qubit control register ``c = c1 c2``.

The garbage register that a gate-level SAVE would need is not simulated;
SAVE is applied as its register-level effect (move every ``c1 = 1``
amplitude onto ``c1 = 0``), which is exact for distinct patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from quam.errors import InputError, InvariantError
from quam.gates import PAULI_X, s_matrix
from quam.patterns import PatternSet, as_patterns, index_to_label
from quam.state import (MAX_CIRCUIT_PATTERN_BITS, MAX_QUBITS, QuantumState,
                        apply_2q, apply_controlled_1q)

RANK_TOL = 1e-10


class StorageOp(NamedTuple):
    """One elementary register operation of the storage circuit.

    ``kind`` is ``"flip_x"`` (arg = x qubit), ``"flip_c1"``, ``"rotate"``
    (arg = p of the S^p gate) or ``"save"``.
    """

    kind: str
    arg: int = -1


@dataclass
class StorageState:
    """Joint state of the x register (qubits ``0..n-1``) and ``c1, c2``."""

    n: int
    state: QuantumState
    op_count: int = 0
    trace: list[tuple[str, np.ndarray]] | None = field(default=None, repr=False)

    @classmethod
    def initial(cls, n: int, record: bool = False) -> "StorageState":
        if not 1 <= n <= MAX_CIRCUIT_PATTERN_BITS:
            raise InputError(
                f"circuit path supports 1 <= n <= {MAX_CIRCUIT_PATTERN_BITS}, got {n}")
        amps = np.zeros(2 ** (n + 2), dtype=np.complex128)
        amps[0] = 1.0
        return cls(n, QuantumState(n + 2, amps, check_norm=False),
                   trace=[] if record else None)

    @property
    def c1(self) -> int:
        return self.n

    @property
    def c2(self) -> int:
        return self.n + 1

    def registers(self) -> np.ndarray:
        """Amplitudes as an array indexed ``[x, c1, c2]``."""
        return self.state.amplitudes.reshape(2 ** self.n, 2, 2)

    def kets(self, tol: float = 1e-12) -> dict[tuple[str, str], complex]:
        """Nonzero terms keyed by ``(x bits, c bits)``."""
        out = {}
        for i in np.flatnonzero(np.abs(self.state.amplitudes) > tol):
            x, c = divmod(int(i), 4)
            out[(index_to_label(x, self.n), index_to_label(c, 2))] = \
                complex(self.state.amplitudes[i])
        return out

    def _record(self, step: str) -> None:
        if self.trace is not None:
            self.trace.append((step, self.state.amplitudes.copy()))


def store_fast(patterns: PatternSet | Sequence[str]) -> QuantumState:
    """Equal-weight superposition of the stored patterns on ``n`` qubits."""
    ps = as_patterns(patterns)
    if ps.n > MAX_QUBITS:
        raise InputError(f"fast path supports n <= {MAX_QUBITS}, got {ps.n}")
    amps = np.zeros(2 ** ps.n, dtype=np.complex128)
    amps[ps.indices] = 1.0 / np.sqrt(ps.m)
    return QuantumState(ps.n, amps, check_norm=False)


def diff_masks(patterns: PatternSet) -> Iterator[str]:
    """XOR of each pattern with its predecessor (all zeros before the first)."""
    prev = 0
    for idx in patterns.indices:
        yield index_to_label(int(idx) ^ prev, patterns.n)
        prev = int(idx)


def plan_storage(patterns: PatternSet | Sequence[str]) -> Iterator[StorageOp]:
    """Elementary operations of the storage loop, in execution order."""
    ps = as_patterns(patterns)
    for p, mask in zip(range(ps.m, 0, -1), diff_masks(ps)):
        for j, bit in enumerate(mask):
            if bit == "1":
                yield StorageOp("flip_x", j)
        yield StorageOp("flip_c1")
        yield StorageOp("rotate", p)
        yield StorageOp("save")


def storage_op_count(patterns: PatternSet | Sequence[str]) -> int:
    """Length of :func:`plan_storage` without simulating it."""
    return sum(1 for _ in plan_storage(patterns))


def _flip_x(st: StorageState, j: int) -> None:
    apply_controlled_1q(st.state, PAULI_X, j, [(st.c2, 0)])
    st.op_count += 1


def _flip_c1(st: StorageState) -> None:
    apply_controlled_1q(st.state, PAULI_X, st.c1, [(st.c2, 0)])
    st.op_count += 1


def _rotate(st: StorageState, p: int) -> None:
    apply_2q(st.state, s_matrix(p), (st.c1, st.c2))
    st.op_count += 1


def flip_step(st: StorageState, diff_mask: str) -> StorageState:
    """FLIP: on the ``c2 = 0`` branch, flip x bits set in ``diff_mask``, then c1."""
    if len(diff_mask) != st.n or any(b not in "01" for b in diff_mask):
        raise InputError(f"diff mask {diff_mask!r} is not a {st.n}-bit string")
    for j, bit in enumerate(diff_mask):
        if bit == "1":
            _flip_x(st, j)
    _flip_c1(st)
    st._record("FLIP")
    return st


def save_step(st: StorageState, tol: float = 1e-15) -> StorageState:
    """SAVE: move each ``c1 = 1`` amplitude to the same x and c2 with ``c1 = 0``.

    Raises:
        InvariantError: if a destination already holds amplitude, which only
            happens when a pattern is stored twice.
    """
    reg = st.registers()
    src = reg[:, 1, :]
    dst = reg[:, 0, :]
    clash = (np.abs(src) > tol) & (np.abs(dst) > tol)
    if clash.any():
        x, c2 = np.argwhere(clash)[0]
        raise InvariantError(
            f"SAVE collision at x={index_to_label(int(x), st.n)}, c2={int(c2)}")
    dst += src
    src[...] = 0.0
    st.op_count += 1
    st._record("SAVE")
    return st


def store_circuit(patterns: PatternSet | Sequence[str],
                  record: bool = False) -> StorageState:
    """Run the storage loop for ``p = m .. 1`` and return the joint state.

    With ``record=True`` the state after every FLIP, S^p and SAVE is kept in
    ``StorageState.trace``.
    """
    ps = as_patterns(patterns)
    st = StorageState.initial(ps.n, record=record)
    for p, mask in zip(range(ps.m, 0, -1), diff_masks(ps)):
        flip_step(st, mask)
        _rotate(st, p)
        st._record(f"S{p}")
        save_step(st)
    reg = st.registers()
    stray = np.abs(reg).copy()
    stray[:, 0, 1] = 0.0
    if stray.max() > RANK_TOL:
        raise InvariantError("control register did not finish in |01>")
    return st


def reduce_registers(st: StorageState, tol: float = RANK_TOL) -> QuantumState:
    """Drop the control register once it is unentangled with x.

    The global phase is fixed so the first nonzero amplitude is real and
    positive.
    """
    mat = st.state.amplitudes.reshape(2 ** st.n, 4)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s[1] > tol:
        raise InvariantError(
            f"control register is entangled with x (second singular value {s[1]:.3g})")
    x = u[:, 0] * s[0]
    lead = x[np.flatnonzero(np.abs(x) > 1e-12)[0]]
    x = x * (abs(lead) / lead)
    x = x / np.linalg.norm(x)
    return QuantumState(st.n, x)
