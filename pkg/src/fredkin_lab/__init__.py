"""Exact verification and numerical synthesis of small quantum logic gates."""

from .algebra import EXACT, FLOAT, ExactScalar, UMatrix, phase_distance
from .circuit import Circuit, compile_circuit, merge_adjacent, parse_dsl, serialize_dsl, truth_table
from .constructions import canonical_fredkin_circuit, fredkin_from_table

__all__ = [
    "EXACT",
    "FLOAT",
    "ExactScalar",
    "UMatrix",
    "phase_distance",
    "Circuit",
    "compile_circuit",
    "merge_adjacent",
    "parse_dsl",
    "serialize_dsl",
    "truth_table",
    "canonical_fredkin_circuit",
    "fredkin_from_table",
]

__version__ = "0.1.0"
