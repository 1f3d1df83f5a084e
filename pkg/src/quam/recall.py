"""Grover search and QuAM pattern completion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from quam import analysis
from quam.errors import InputError
from quam.gates import invert_about_mean, phase_invert, walsh_all
from quam.patterns import PatternSet, Query, as_patterns, as_query
from quam.state import (QuantumState, new_basis_state, probability_of,
                        sample_indices)
from quam.storage import reduce_registers, store_circuit, store_fast

Trace = list[tuple[str, np.ndarray]]


def query_marks(query: Query | str, n: int | None = None,
                allow_all: bool = False) -> np.ndarray:
    """Sorted basis indices matching ``query``.

    An all-wildcard query marks every state, which makes recall meaningless,
    so it is rejected unless ``allow_all`` is set.
    """
    q = as_query(query)
    if n is not None and q.n != n:
        raise InputError(f"query {q} does not have {n} symbols")
    if q.is_all_wildcard and not allow_all:
        raise InputError("query has no known bits")
    return q.matching_indices()


def default_iterations(n: int) -> int:
    return round(math.pi / 4 * math.sqrt(2 ** n))


@dataclass
class GroverRun:
    state: QuantumState
    success: list[float]
    trace: Trace | None = None


def grover_classic(n: int, target: str, iterations: int | None = None,
                   initial: QuantumState | None = None,
                   record: bool = False) -> GroverRun:
    """Textbook Grover search for a single basis state.

    Starts from ``W|0...0>`` unless ``initial`` is given (the state is copied).
    ``success[t]`` is the probability of observing ``target`` after ``t``
    iterations, for ``t = 0 .. iterations``.
    """
    if len(target) != n:
        raise InputError(f"target {target!r} does not have {n} bits")
    if iterations is None:
        iterations = default_iterations(n)
    if iterations < 0:
        raise InputError("iterations must be non-negative")
    trace: Trace | None = [] if record else None
    if initial is None:
        state = new_basis_state(n, "0" * n)
        _log(trace, "init", state)
        walsh_all(state)
        _log(trace, "W", state)
    else:
        if initial.n != n:
            raise InputError("initial state has the wrong qubit count")
        state = initial.copy()
        _log(trace, "init", state)
    marks = query_marks(target, n)
    success = [probability_of(state, target)]
    for _ in range(iterations):
        phase_invert(state, marks)
        _log(trace, "I_tau", state)
        invert_about_mean(state)
        _log(trace, "G", state)
        success.append(probability_of(state, target))
    return GroverRun(state, success, trace)


def _log(trace: Trace | None, step: str, state: QuantumState) -> None:
    if trace is not None:
        trace.append((step, state.amplitudes.copy()))


def recall_preamble(state: QuantumState, patterns: PatternSet,
                    marks: np.ndarray, trace: Trace | None = None) -> QuantumState:
    """Mark query, diffuse, mark stored-or-query, diffuse (in place)."""
    phase_invert(state, marks)
    _log(trace, "I_tau", state)
    invert_about_mean(state)
    _log(trace, "G", state)
    phase_invert(state, np.union1d(patterns.indices, marks))
    _log(trace, "I_rho", state)
    invert_about_mean(state)
    _log(trace, "G", state)
    return state


def grover_round(state: QuantumState, marks: np.ndarray,
                 trace: Trace | None = None) -> QuantumState:
    phase_invert(state, marks)
    _log(trace, "I_tau", state)
    invert_about_mean(state)
    _log(trace, "G", state)
    return state


def quam_recall_state(stored: QuantumState, patterns: PatternSet | Sequence[str],
                      query: Query | str, T_override: int | None = None,
                      trace: Trace | None = None) -> QuantumState:
    """Run QuAM recall on a copy of ``stored`` and return the final state.

    ``T_override`` replaces the model's optimal number of extra rounds.
    """
    ps, q = as_patterns(patterns), as_query(query)
    marks = query_marks(q, ps.n)
    if stored.n != ps.n:
        raise InputError("stored state and pattern set disagree on n")
    if T_override is not None and T_override < 0:
        raise InputError("T_override must be non-negative")
    T = T_override if T_override is not None else \
        analysis.optimal_T(analysis.derive_parameters(ps, q))
    state = stored.copy()
    recall_preamble(state, ps, marks, trace)
    for _ in range(T):
        grover_round(state, marks, trace)
    return state


def quam_success_curve(patterns: PatternSet | Sequence[str], query: Query | str,
                       t_max: int) -> list[float]:
    """Exact probability of a query-matching observation after ``t`` extra rounds."""
    ps, q = as_patterns(patterns), as_query(query)
    marks = query_marks(q, ps.n)
    state = recall_preamble(store_fast(ps), ps, marks)
    curve = [float(np.sum(state.probabilities()[marks]))]
    for _ in range(t_max):
        grover_round(state, marks)
        curve.append(float(np.sum(state.probabilities()[marks])))
    return curve


@dataclass
class RecallOutcome:
    """Result of one QuAM recall.

    ``probabilities`` is the exact final distribution over all ``2**n``
    basis states; ``votes`` counts sampled observations that match the query.
    ``answer`` is ``None`` when no observation matched (recall failure).
    """

    n: int
    query: str
    probabilities: np.ndarray
    answer: str | None
    votes: dict[str, int]
    T: int
    p_success: float
    shots: int
    op_counts: dict[str, int] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.answer is None

    def distribution(self, tol: float = 0.0) -> dict[str, float]:
        idx = np.flatnonzero(self.probabilities > tol)
        return {format(int(i), f"0{self.n}b"): float(self.probabilities[i])
                for i in idx}


def vote(labels: Sequence[str] | dict[str, int]) -> str | None:
    """Most frequent label; ties go to the lexicographically smallest."""
    counts = labels if isinstance(labels, dict) else _count(labels)
    if not counts:
        return None
    return min(counts, key=lambda k: (-counts[k], k))


def _count(labels: Sequence[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for lab in labels:
        out[lab] = out.get(lab, 0) + 1
    return out


def quam_recall(patterns: PatternSet | Sequence[str], query: Query | str,
                shots: int = 1000, seed: int | np.random.Generator | None = 0,
                T_override: int | None = None, method: str = "fast") -> RecallOutcome:
    """Store, recall, observe ``shots`` times and vote among matching outcomes."""
    ps, q = as_patterns(patterns), as_query(query)
    marks = query_marks(q, ps.n)
    if shots < 1:
        raise InputError(f"shots must be positive, got {shots}")
    if method == "fast":
        stored = store_fast(ps)
        storage_ops = ps.m
    elif method == "circuit":
        st = store_circuit(ps)
        stored = reduce_registers(st)
        storage_ops = st.op_count
    else:
        raise InputError(f"unknown storage method {method!r}")

    T = T_override if T_override is not None else \
        analysis.optimal_T(analysis.derive_parameters(ps, q))
    final = quam_recall_state(stored, ps, q, T_override=T)
    probs = final.probabilities()
    p_success = float(np.sum(probs[marks]))

    draws = sample_indices(final, shots, seed)
    matched = draws[np.isin(draws, marks)]
    values, counts = np.unique(matched, return_counts=True)
    votes = {final.label(int(v)): int(c) for v, c in zip(values, counts)}
    return RecallOutcome(
        n=ps.n, query=q.symbols, probabilities=probs, answer=vote(votes),
        votes=votes, T=T, p_success=p_success, shots=shots,
        op_counts={"storage": storage_ops,
                   "phase_invert": 2 + T,
                   "invert_about_mean": 2 + T})

