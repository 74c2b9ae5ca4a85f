"""Stabilizer circuit sampling with symbolic phases.

A single pass over the circuit turns every measurement outcome into an XOR
of bit-symbols (Pauli faults and fair coins); shots are then a GF(2)
product of those expressions with sampled symbol assignments.
"""

from .circuit import Instruction, parse_circuit
from .engine import CompiledCircuit, initialize
from .sampler import draw_assignments, encode_shots, sample, sample_compiled
from .tableau import MeasurementExpression, SymbolicTableau

__all__ = [
    "CompiledCircuit",
    "Instruction",
    "MeasurementExpression",
    "SymbolicTableau",
    "draw_assignments",
    "encode_shots",
    "initialize",
    "parse_circuit",
    "sample",
    "sample_compiled",
]
__version__ = "0.1.0"
