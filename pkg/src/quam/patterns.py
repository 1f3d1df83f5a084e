"""Binary pattern sets and partial-pattern queries.

Bit strings are written most-significant bit first: the string ``"0110"``
is basis index 6, and character ``j`` of a label is qubit ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from quam.errors import DataError, InputError

WILDCARD = "?"


def label_to_index(label: str) -> int:
    if not label or any(ch not in "01" for ch in label):
        raise InputError(f"not a bit string: {label!r}")
    return int(label, 2)


def index_to_label(index: int, n: int) -> str:
    return format(index, f"0{n}b")


@dataclass(frozen=True)
class PatternSet:
    """An ordered collection of ``m`` distinct ``n``-bit patterns.

    The order matters only for the storage circuit, which processes
    patterns first to last; the stored superposition does not depend on it.
    """

    patterns: tuple[str, ...]
    _indices: np.ndarray | None = field(init=False, repr=False, compare=False,
                                        default=None)

    def __post_init__(self) -> None:
        pats = tuple(self.patterns)
        if not pats:
            raise DataError("pattern set is empty")
        n = len(pats[0])
        if n == 0:
            raise DataError("patterns must have at least one bit")
        seen: dict[str, int] = {}
        for i, pat in enumerate(pats):
            if len(pat) != n:
                raise DataError(
                    f"pattern {i + 1} has length {len(pat)}, expected {n}")
            if any(ch not in "01" for ch in pat):
                raise DataError(f"pattern {i + 1} is not binary: {pat!r}")
            if pat in seen:
                raise DataError(
                    f"pattern {i + 1} duplicates pattern {seen[pat] + 1}: {pat}")
            seen[pat] = i
        object.__setattr__(self, "patterns", pats)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "PatternSet":
        return cls(tuple(index_to_label(int(i), n) for i in indices))

    @classmethod
    def random(cls, n: int, m: int,
               rng: np.random.Generator | int | None = None) -> "PatternSet":
        """Draw ``m`` distinct patterns uniformly without replacement."""
        if not 1 <= m <= 2 ** n:
            raise InputError(f"cannot draw {m} distinct {n}-bit patterns")
        rng = np.random.default_rng(rng)
        return cls.from_indices(n, rng.choice(2 ** n, size=m, replace=False))

    @property
    def n(self) -> int:
        return len(self.patterns[0])

    @property
    def m(self) -> int:
        return len(self.patterns)

    @property
    def indices(self) -> np.ndarray:
        """Basis indices of the patterns, in pattern order (read-only).

        Built on first use; patterns wider than 62 bits have no index.
        """
        if self._indices is None:
            if self.n > 62:
                raise InputError(f"{self.n}-bit patterns have no basis index")
            idx = np.fromiter((int(p, 2) for p in self.patterns), dtype=np.int64,
                              count=len(self.patterns))
            idx.setflags(write=False)
            object.__setattr__(self, "_indices", idx)
        return self._indices

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __contains__(self, pattern: object) -> bool:
        return pattern in self.patterns


@dataclass(frozen=True)
class Query:
    """A partial pattern over ``{0, 1, ?}``; ``?`` matches either bit."""

    symbols: str

    def __post_init__(self) -> None:
        if not self.symbols:
            raise InputError("query is empty")
        bad = set(self.symbols) - {"0", "1", WILDCARD}
        if bad:
            raise InputError(
                f"query {self.symbols!r} has invalid symbols {sorted(bad)}")

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def wildcards(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.symbols) if s == WILDCARD)

    @property
    def is_all_wildcard(self) -> bool:
        return len(self.wildcards) == self.n

    def matches(self, label: str) -> bool:
        if len(label) != self.n:
            return False
        return all(q == WILDCARD or q == b for q, b in zip(self.symbols, label))

    def matching_indices(self) -> np.ndarray:
        """All basis indices consistent with the query, in ascending order."""
        n = self.n
        base = int(self.symbols.replace(WILDCARD, "0"), 2)
        out = np.array([base], dtype=np.int64)
        # Wildcards from least to most significant keeps the result sorted.
        for pos in reversed(self.wildcards):
            bit = 1 << (n - 1 - pos)
            out = np.concatenate([out, out + bit])
        return out

    def __str__(self) -> str:
        return self.symbols


def as_query(query: Query | str) -> Query:
    return query if isinstance(query, Query) else Query(query)


def as_patterns(patterns: PatternSet | Sequence[str]) -> PatternSet:
    return patterns if isinstance(patterns, PatternSet) else PatternSet(tuple(patterns))
