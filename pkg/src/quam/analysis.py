"""Closed-form accuracy model for QuAM recall.

After the two-oracle preamble (mark query, diffuse, mark stored-or-query,
diffuse) every amplitude falls into one of four classes:

=====  ======================================  ===================
class  basis states                            amplitude
=====  ======================================  ===================
k0     marked, not stored         (r0 states)  ``4a - ab``
k1     marked, stored             (r1 states)  ``4a - ab + 1``
l0     unmarked, not stored  (N - p - r0)      ``2a - ab``
l1     unmarked, stored          (p - r1)      ``4a - ab - 1``
=====  ======================================  ===================

with ``a = 2(p - 2 r1)/N`` and ``b = 4(p + r0)/N``. These values are in units
of the initial stored amplitude ``1/sqrt(p)``; :class:`TheoryReport` keeps them
unscaled and the probability functions apply the ``1/p`` factor themselves.

Each further round (mark query, diffuse) rotates the pair of class averages
``(sqrt(r) * kbar, sqrt(N - r) * lbar)`` by ``arccos(1 - 2r/N)`` while
leaving each amplitude's deviation from its class average unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from quam.errors import InputError
from quam.patterns import PatternSet, Query, as_patterns, as_query


@dataclass(frozen=True)
class RecallParameters:
    """Counts that fully determine the recall dynamics.

    Attributes:
        N: number of basis states, ``2**n``.
        p: number of stored patterns.
        r0: marked (query-matching) states that are not stored.
        r1: marked states that are stored.
    """

    N: int
    p: int
    r0: int
    r1: int

    def __post_init__(self) -> None:
        if min(self.N, self.p) < 1 or min(self.r0, self.r1) < 0:
            raise InputError(f"invalid recall parameters {self}")
        if self.r1 > self.p or self.p > self.N or self.r0 + self.r1 > self.N:
            raise InputError(f"inconsistent recall parameters {self}")
        if self.r0 > self.N - self.p:
            raise InputError(f"r0 exceeds the number of unstored states in {self}")

    @property
    def r(self) -> int:
        return self.r0 + self.r1


class FirstRound(NamedTuple):
    a: float
    b: float
    k0: float
    k1: float
    l0: float
    l1: float


@dataclass
class TheoryReport:
    params: RecallParameters
    a: float
    b: float
    k0: float
    k1: float
    l0: float
    l1: float
    k_bar: float
    l_bar: float
    p_max: float
    T: int
    T_raw: float
    p_table: list[float] = field(default_factory=list)
    clamped: bool = False

    def as_dict(self) -> dict:
        return {
            "N": self.params.N, "p": self.params.p,
            "r0": self.params.r0, "r1": self.params.r1,
            "a": self.a, "b": self.b,
            "k0": self.k0, "k1": self.k1, "l0": self.l0, "l1": self.l1,
            "k_bar": self.k_bar, "l_bar": self.l_bar,
            "p_max": self.p_max, "p_max_clamped": self.clamped,
            "T": self.T, "T_raw": self.T_raw,
            "p_t": self.p_table,
        }


def derive_parameters(patterns: PatternSet | Sequence[str],
                      query: Query | str) -> RecallParameters:
    ps, q = as_patterns(patterns), as_query(query)
    if q.n != ps.n:
        raise InputError(f"query {q} does not match pattern length {ps.n}")
    matching = q.matching_indices()
    r1 = int(np.count_nonzero(np.isin(ps.indices, matching)))
    return RecallParameters(N=2 ** ps.n, p=ps.m, r0=matching.size - r1, r1=r1)


def first_round(params: RecallParameters) -> FirstRound:
    N, p, r0, r1 = params.N, params.p, params.r0, params.r1
    a = 2.0 * (p - 2 * r1) / N
    b = 4.0 * (p + r0) / N
    return FirstRound(a, b,
                      k0=4 * a - a * b,
                      k1=4 * a - a * b + 1,
                      l0=2 * a - a * b,
                      l1=4 * a - a * b - 1)


def averages(params: RecallParameters) -> tuple[float, float]:
    """Mean marked and unmarked amplitudes after the preamble (unscaled)."""
    N, p, r0, r1 = params.N, params.p, params.r0, params.r1
    if r0 + r1 == 0:
        raise InputError("no marked states: the marked average is undefined")
    fr = first_round(params)
    a, b = fr.a, fr.b
    k_bar = 4 * a - a * b + r1 / (r0 + r1)
    if N - r0 - r1 == 0:
        # Every state is marked; the unmarked average is empty.
        return k_bar, 0.0
    l_bar = (-a * b + 2 * a * (N + p - r0 - 2 * r1) / (N - r0 - r1)
             - (p - r1) / (N - r0 - r1))
    return k_bar, l_bar


def _p_max_raw(params: RecallParameters) -> float:
    N, p, r0, r1 = params.N, params.p, params.r0, params.r1
    fr = first_round(params)
    _, l_bar = averages(params)
    return (1.0 - (N - p - r0) * (fr.l0 - l_bar) ** 2 / p
            - (p - r1) * (fr.l1 - l_bar) ** 2 / p)


def p_max(params: RecallParameters) -> float:
    """Upper bound on the probability of observing a query-matching state."""
    return min(1.0, max(0.0, _p_max_raw(params)))


def p_max_biron(amplitudes: Sequence[complex] | np.ndarray,
                desired: Sequence[int] | np.ndarray) -> float:
    """Best achievable success of plain Grover iteration from ``amplitudes``.

    One minus the summed squared deviation of the undesired amplitudes from
    their mean.
    """
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    mask = np.ones(amps.size, dtype=bool)
    mask[np.asarray(desired, dtype=np.int64)] = False
    rest = amps[mask]
    if rest.size == 0:
        return 1.0
    return float(1.0 - np.sum(np.abs(rest - rest.mean()) ** 2))


def evolve_averages(params: RecallParameters, k_bar: float, l_bar: float,
                    t: int) -> tuple[float, float]:
    """Class averages after ``t`` further (mark query, diffuse) rounds."""
    if t < 0:
        raise InputError(f"t must be non-negative, got {t}")
    N, r = params.N, params.r
    c = 1.0 - 2.0 * r / N
    for _ in range(t):
        k_bar, l_bar = (c * k_bar + 2.0 * (N - r) / N * l_bar,
                        (N - 2.0 * r) / N * l_bar - 2.0 * r / N * k_bar)
    return k_bar, l_bar


def p_at(params: RecallParameters, t: int) -> float:
    """Probability of a query-matching observation after ``t`` extra rounds."""
    k_bar, l_bar = averages(params)
    _, l_t = evolve_averages(params, k_bar, l_bar, t)
    return _p_max_raw(params) - (params.N - params.r) * l_t ** 2 / params.p


def optimal_T_raw(params: RecallParameters) -> float:
    N, r = params.N, params.r
    if r == 0 or r == N:
        raise InputError(f"optimal T needs 0 < r0 + r1 < N, got r = {r}")
    k_bar, l_bar = averages(params)
    if l_bar == 0.0:
        phase = math.copysign(math.pi / 2, k_bar)
    else:
        phase = math.atan(k_bar / l_bar * math.sqrt(r / (N - r)))
    return (math.pi / 2 - phase) / math.acos(1.0 - 2.0 * r / N)


def round_half_away(x: float) -> int:
    return int(math.floor(abs(x) + 0.5)) * (1 if x >= 0 else -1)


def rotation_angle(params: RecallParameters) -> float:
    return math.acos(1.0 - 2.0 * params.r / params.N)


def success_period(params: RecallParameters) -> float:
    """Rounds (non-integer) after which the success probability repeats."""
    return math.pi / rotation_angle(params)


def _nearest_T(raw: float, period: float) -> int:
    t = max(0, round_half_away(raw))
    # raw lies in (0, period); when it sits just below the period, the peak
    # at raw - period is nearer to t = 0 than any later integer.
    if period - raw <= abs(t - raw):
        return 0
    return t


def optimal_T(params: RecallParameters) -> int:
    """First integer number of extra rounds bringing success closest to :func:`p_max`."""
    return _nearest_T(optimal_T_raw(params), success_period(params))


def theory_report(params: RecallParameters, t_max: int | None = None) -> TheoryReport:
    """Evaluate the whole model; ``p_table[t]`` is :func:`p_at` for ``t <= t_max``."""
    fr = first_round(params)
    k_bar, l_bar = averages(params)
    raw = _p_max_raw(params)
    if 0 < params.r < params.N:
        T_raw = optimal_T_raw(params)
        T = _nearest_T(T_raw, success_period(params))
    else:
        T_raw, T = 0.0, 0
    if t_max is None:
        t_max = 2 * round(math.pi / 4 * math.sqrt(params.N))
    table = [p_at(params, t) for t in range(t_max + 1)]
    return TheoryReport(params, fr.a, fr.b, fr.k0, fr.k1, fr.l0, fr.l1,
                        k_bar, l_bar, p_max(params), T, T_raw, table,
                        clamped=not 0.0 <= raw <= 1.0)
