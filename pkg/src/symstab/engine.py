"""One forward pass over a circuit, producing one XOR expression per measurement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .circuit import NOISE, CircuitSummary, Instruction, decompose_noise, summarize
from .tableau import MeasurementExpression, SymbolicTableau, SymbolRegistry


@dataclass
class CompiledCircuit:
    instructions: list[Instruction]
    summary: CircuitSummary
    registry: SymbolRegistry
    expressions: list[MeasurementExpression]
    # (instruction index, qubit) for each entry of ``expressions``
    measurement_sources: list[tuple[int, int]]
    tableau: SymbolicTableau | None = None

    @property
    def n_measurements(self) -> int:
        return len(self.expressions)

    @property
    def n_symbols(self) -> int:
        return len(self.registry)

    def expression_rows(self) -> list[tuple[int, ...]]:
        return [e.symbols for e in self.expressions]


Trace = Callable[[int, Instruction, SymbolicTableau], None]


def apply_instruction(t: SymbolicTableau, idx: int, inst: Instruction, out: list, sources: list) -> None:
    k = inst.kind
    if k == "H":
        for q in inst.targets:
            t.h(q)
    elif k == "S":
        for q in inst.targets:
            t.s(q)
    elif k == "S_DAG":
        for q in inst.targets:
            t.s_dag(q)
    elif k in ("X", "Y", "Z"):
        for q in inst.targets:
            t.pauli(q, k)
    elif k == "CX":
        for a, b in inst.pairs():
            t.cx(a, b)
    elif k in NOISE:
        for q, axis, s in decompose_noise(inst, t.registry, idx):
            t.pauli(q, axis, s)
    elif k == "M":
        for q in inst.targets:
            out.append(t.measure(q, idx))
            sources.append((idx, q))
    elif k == "R":
        for q in inst.targets:
            t.reset(q, idx)
    elif k == "TICK":
        pass
    else:  # pragma: no cover - parser rejects unknown kinds
        raise ValueError(f"unsupported instruction {k}")


def initialize(instructions, trace: Trace | None = None, n_qubits: int | None = None, keep_tableau=False) -> CompiledCircuit:
    """Run the symbolic tableau over ``instructions``; ``trace`` sees the tableau after each one."""
    instructions = list(instructions)
    summary = summarize(instructions)
    n = max(summary.n_qubits, n_qubits or 0, 1)
    t = SymbolicTableau(n, summary.symbol_capacity)
    expressions: list[MeasurementExpression] = []
    sources: list[tuple[int, int]] = []
    for idx, inst in enumerate(instructions):
        apply_instruction(t, idx, inst, expressions, sources)
        if trace is not None:
            trace(idx, inst, t)
    return CompiledCircuit(instructions, summary, t.registry, expressions, sources, t if keep_tableau else None)
