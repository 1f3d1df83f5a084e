"""Classical Hopfield associative memory used as a capacity baseline.

Patterns are bit strings; internally bit ``0`` maps to ``-1`` and ``1`` to
``+1``. Training is the Hebbian outer-product rule with a zero diagonal and
recall uses asynchronous sign updates in a seeded random order. A unit whose
local field is exactly zero keeps its current value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from quam.errors import InputError
from quam.patterns import PatternSet, WILDCARD, as_patterns


def to_spins(pattern: str) -> np.ndarray:
    return np.array([1 if b == "1" else -1 for b in pattern], dtype=np.int64)


def to_bits(x: np.ndarray) -> str:
    return "".join("1" if v > 0 else "0" for v in x)


@dataclass
class HopfieldNet:
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass
class HopfieldRecall:
    pattern: str
    converged: bool
    sweeps: int


def train(patterns: PatternSet | Sequence[str] | np.ndarray) -> HopfieldNet:
    """Hebbian weights ``w_ij = (1/n) sum_p x_i x_j`` with ``w_ii = 0``.

    ``patterns`` may also be an ``(m, n)`` array of +-1 spins.
    """
    if isinstance(patterns, np.ndarray):
        x = patterns.astype(np.float64)
    else:
        x = np.array([to_spins(p) for p in as_patterns(patterns)], dtype=np.float64)
    n = x.shape[1]
    w = x.T @ x / n
    np.fill_diagonal(w, 0.0)
    return HopfieldNet(w)


def energy(net: HopfieldNet, x: np.ndarray) -> float:
    return float(-0.5 * x @ net.weights @ x)


def update_unit(net: HopfieldNet, x: np.ndarray, i: int) -> bool:
    """Asynchronously update unit ``i`` in place; return whether it changed."""
    h = net.weights[i] @ x
    if h == 0:
        return False
    new = 1 if h > 0 else -1
    changed = new != x[i]
    x[i] = new
    return bool(changed)


def settle(net: HopfieldNet, x: np.ndarray, rng: np.random.Generator,
           max_sweeps: int = 100) -> tuple[bool, int]:
    """Run sweeps until one changes nothing; returns (converged, sweeps used)."""
    for sweep in range(1, max_sweeps + 1):
        changed = False
        for i in rng.permutation(net.n):
            changed |= update_unit(net, x, int(i))
        if not changed:
            return True, sweep
    return False, max_sweeps


def recall(net: HopfieldNet, probe: str, max_sweeps: int = 100,
           seed: int | np.random.Generator | None = 0) -> HopfieldRecall:
    """Complete ``probe``; wildcard bits start from random spins."""
    if len(probe) != net.n:
        raise InputError(f"probe has {len(probe)} bits, network has {net.n}")
    rng = np.random.default_rng(seed)
    x = np.array([rng.choice((-1, 1)) if b == WILDCARD else (1 if b == "1" else -1)
                  for b in probe], dtype=np.int64)
    converged, sweeps = settle(net, x, rng, max_sweeps)
    return HopfieldRecall(to_bits(x), converged, sweeps)


def capacity_sweep(n: int, m_values: Iterable[int], trials: int,
                   seed: int | None = 0, max_sweeps: int = 100) -> list[tuple[int, float]]:
    """Fraction of stored patterns that recall exactly from themselves.

    For each ``m``, ``trials`` networks are trained on ``m`` random spin
    patterns and every stored pattern is used as a probe; a recall counts
    only if it settles on the probe with all ``n`` bits intact.
    """
    if trials < 1:
        raise InputError(f"trials must be positive, got {trials}")
    m_values = list(m_values)
    if not m_values or min(m_values) < 1:
        raise InputError("m values must be positive")
    rng = np.random.default_rng(seed)
    table = []
    for m in m_values:
        hits = 0
        for _ in range(trials):
            pats = rng.choice((-1, 1), size=(m, n))
            net = train(pats)
            for pat in pats:
                x = pat.copy()
                converged, _ = settle(net, x, rng, max_sweeps)
                hits += converged and np.array_equal(x, pat)
        table.append((m, hits / (m * trials)))
    return table
