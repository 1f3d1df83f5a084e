"""Quantum associative memory (QuAM) simulation.

Patterns are stored as an equal-weight superposition and completed from
partial queries with a modified Grover search; :mod:`quam.analysis` predicts
the outcome in closed form and :mod:`quam.hopfield` provides a classical
baseline.
"""

from quam.analysis import (RecallParameters, TheoryReport, derive_parameters,
                           optimal_T, p_at, p_max, theory_report)
from quam.errors import DataError, InputError, InvariantError, QuamError
from quam.patterns import PatternSet, Query
from quam.recall import RecallOutcome, grover_classic, quam_recall, quam_recall_state
from quam.state import QuantumState, new_basis_state
from quam.storage import store_circuit, store_fast

__version__ = "0.1.0"
