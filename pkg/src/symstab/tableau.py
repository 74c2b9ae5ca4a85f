"""Stabilizer tableau whose phases are XOR expressions over bit-symbols.

Storage is one :class:`TiledBitMatrix` with ``2n`` rows (destabilizers
first, then stabilizers) and three column blocks: X bits, Z bits, and the
phase block whose column ``s`` holds symbol ``s`` (column 0 is the constant
term).  Each block starts on a tile boundary so the X and Z words of a row
line up for packed row products.

Gates run in column-major tile order; measurements run in row-major order.
The tableau flips orientation lazily when the next operation needs the
other one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from ._layout import TILE, n_tiles
from .bitmatrix import COLUMN, ROW, TiledBitMatrix
from .errors import SymbolCapacityError, TableauInvariantError
from .pauli import PauliRow, SymbolicPhase

FAULT = "fault"
MEASUREMENT = "measurement"
CONSTANT = "constant"


@dataclass(frozen=True)
class SymbolOrigin:
    kind: str
    instruction_index: int
    group_id: int


@dataclass(frozen=True)
class SymbolGroup:
    """Symbols sampled jointly.

    ``distribution`` is ``"bernoulli"`` (one symbol, P(1) = param) or
    ``"pauli"`` (2 or 4 symbols; the all-zero pattern has probability
    ``1 - param`` and each other pattern ``param / (2**arity - 1)``).
    """

    group_id: int
    origin: str
    distribution: str
    param: float
    symbols: tuple[int, ...]
    instruction_index: int
    qubits: tuple[int, ...]
    label: str = ""

    @property
    def arity(self) -> int:
        return len(self.symbols)


class SymbolRegistry:
    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("symbol capacity must include the constant symbol")
        self.capacity = capacity
        self.entries: list[SymbolOrigin] = [SymbolOrigin(CONSTANT, -1, 0)]
        self.groups: list[SymbolGroup] = [SymbolGroup(0, CONSTANT, "bernoulli", 1.0, (0,), -1, ())]

    def __len__(self) -> int:
        return len(self.entries)

    def allocate(self, origin, distribution, param, arity, instruction_index=-1, qubits=(), label=""):
        start = len(self.entries)
        if start + arity > self.capacity:
            raise SymbolCapacityError(
                f"symbol capacity {self.capacity} exhausted (need {start + arity}); pre-pass undercounted"
            )
        gid = len(self.groups)
        ids = tuple(range(start, start + arity))
        self.entries.extend(SymbolOrigin(origin, instruction_index, gid) for _ in ids)
        self.groups.append(SymbolGroup(gid, origin, distribution, float(param), ids, instruction_index, tuple(qubits), label))
        return ids

    def allocate_coin(self, instruction_index=-1, qubit=-1, label="M") -> int:
        (s,) = self.allocate(MEASUREMENT, "bernoulli", 0.5, 1, instruction_index, (qubit,), label)
        return s

    def group_of(self, symbol: int) -> SymbolGroup:
        return self.groups[self.entries[symbol].group_id]


@dataclass(frozen=True)
class MeasurementExpression:
    """Sorted symbol ids whose XOR is the outcome (id 0 is the constant 1)."""

    symbols: tuple[int, ...] = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.symbols, self.symbols[1:])):
            raise ValueError("symbol ids must be strictly increasing")

    @classmethod
    def from_bits(cls, bits) -> MeasurementExpression:
        return cls(tuple(int(i) for i in np.flatnonzero(bits)))

    def evaluate(self, assignment) -> int:
        a = np.asarray(assignment)
        return int(np.bitwise_xor.reduce(a[list(self.symbols)].astype(np.uint8))) if self.symbols else 0

    def render(self) -> str:
        if not self.symbols:
            return "0"
        parts = ["1" if s == 0 else f"s{s}" for s in self.symbols]
        return " ^ ".join(parts)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


class SymbolicTableau:
    def __init__(self, n: int, symbol_capacity: int = 1):
        if n < 1:
            raise ValueError("a tableau needs at least one qubit")
        self.n = n
        self.registry = SymbolRegistry(symbol_capacity)
        self._qt = n_tiles(n)
        self.z_col = self._qt * TILE
        self.phase_col = 2 * self._qt * TILE
        self.storage = TiledBitMatrix(2 * n, self.phase_col + n_tiles(symbol_capacity) * TILE, COLUMN)
        for i in range(n):
            self.storage.set_bit(i, i, 1)
            self.storage.set_bit(n + i, self.z_col + i, 1)

    # -- bookkeeping ---------------------------------------------------------

    @property
    def symbol_capacity(self) -> int:
        return self.registry.capacity

    @property
    def n_symbols_used(self) -> int:
        return len(self.registry)

    @property
    def orientation(self):
        return self.storage.orientation

    def _active_tiles(self) -> int:
        return 2 * self._qt + n_tiles(self.n_symbols_used)

    def _orient(self, o) -> None:
        self.storage.ensure(o, self._active_tiles())

    def _qubit(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.n:
            raise IndexError(f"qubit {a} outside 0..{self.n - 1}")
        return a

    def _symbol(self, s: int) -> int:
        s = int(s)
        if not 0 <= s < self.n_symbols_used:
            raise KeyError(f"symbol s{s} has not been allocated")
        return s

    # -- Clifford gates ------------------------------------------------------

    def h(self, a: int) -> None:
        a = self._qubit(a)
        self._orient(COLUMN)
        kernels.backend.gate_h(self.storage.data, a, self.z_col + a, self.phase_col)

    def s(self, a: int) -> None:
        a = self._qubit(a)
        self._orient(COLUMN)
        kernels.backend.gate_s(self.storage.data, a, self.z_col + a, self.phase_col)

    def s_dag(self, a: int) -> None:
        a = self._qubit(a)
        self._orient(COLUMN)
        kernels.backend.gate_s_dag(self.storage.data, a, self.z_col + a, self.phase_col)

    def cx(self, a: int, b: int) -> None:
        a, b = self._qubit(a), self._qubit(b)
        if a == b:
            raise ValueError("CX control and target must differ")
        self._orient(COLUMN)
        kernels.backend.gate_cx(self.storage.data, a, self.z_col + a, b, self.z_col + b, self.phase_col)

    # -- Pauli gates with symbolic exponents -----------------------------------

    def _pauli(self, a, s, m1, m2):
        a, s = self._qubit(a), self._symbol(s)
        # Works in either orientation, so no flip is forced.
        kernels.backend.pauli_phase(self.storage.data, self.phase_col + s, m1, m2, self.storage.row_major)

    def x(self, a: int, s: int = 0) -> None:
        """Apply X**s on qubit ``a``: rows with a Z component there gain symbol ``s``."""
        self._pauli(a, s, self.z_col + int(a), -1)

    def z(self, a: int, s: int = 0) -> None:
        self._pauli(a, s, int(a), -1)

    def y(self, a: int, s: int = 0) -> None:
        self._pauli(a, s, int(a), self.z_col + int(a))

    def pauli(self, a: int, axis: str, s: int = 0) -> None:
        {"X": self.x, "Y": self.y, "Z": self.z}[axis.upper()](a, s)

    def conditional_pauli(self, a: int, axis: str, expr: MeasurementExpression) -> None:
        for s in expr:
            self._symbol(s)
        for s in expr:
            self.pauli(a, axis, s)

    # -- measurement -----------------------------------------------------------

    def is_deterministic(self, a: int) -> bool:
        a = self._qubit(a)
        return not self.storage.column(a)[self.n :].any()

    def measure(self, a: int, instruction_index: int = -1, label: str = "M") -> MeasurementExpression:
        a = self._qubit(a)
        n = self.n
        self._orient(ROW)
        data = self.storage.data
        xcol = kernels.backend.read_col(data, a, True)[: 2 * n]
        hits = np.flatnonzero(xcol[n:])
        n_tc = self._active_tiles()
        if hits.size:
            p = n + int(hits[0])
            if self.n_symbols_used >= self.symbol_capacity:
                raise SymbolCapacityError(f"no symbol left for the random measurement of qubit {a}")
            targets = np.flatnonzero(xcol).astype(np.int64)
            # The paired destabilizer is overwritten below, so it is skipped here.
            targets = targets[(targets != p) & (targets != p - n)]
            if not kernels.backend.rowsum_many(data, targets, p, self._qt, n_tc):
                raise TableauInvariantError("rowsum produced an imaginary phase; tableau corrupted")
            kernels.backend.row_copy(data, p - n, p, n_tc)
            kernels.backend.row_clear(data, p, n_tc)
            s = self.registry.allocate_coin(instruction_index, a, label)
            self.storage.set_bit(p, self.z_col + a, 1)
            self.storage.set_bit(p, self.phase_col + s, 1)
            return MeasurementExpression((s,))
        rows = (n + np.flatnonzero(xcol[:n])).astype(np.int64)
        acc, ok = kernels.backend.row_product(data, rows, self._qt, n_tc)
        if not ok:
            raise TableauInvariantError("stabilizer rows anticommute; tableau corrupted")
        phase = acc[2 * self._qt * (TILE // 8) :]
        bits = np.unpackbits(phase, bitorder="little")[: self.n_symbols_used]
        return MeasurementExpression.from_bits(bits)

    def reset(self, a: int, instruction_index: int = -1) -> None:
        """Measure, then apply X conditioned on the outcome."""
        m = self.measure(a, instruction_index, label="R")
        self.conditional_pauli(a, "X", m)

    # -- inspection ------------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        """(2n, 2n + n_symbols_used) array laid out as [X | Z | s0 s1 ...]."""
        d = self.storage.to_dense()
        n = self.n
        return np.hstack(
            [d[:, :n], d[:, self.z_col : self.z_col + n], d[:, self.phase_col : self.phase_col + self.n_symbols_used]]
        )

    def row(self, i: int) -> PauliRow:
        d = self.to_dense()[i]
        n = self.n
        return PauliRow(d[:n], d[n : 2 * n], SymbolicPhase(d[2 * n :].copy()))

    def rows(self) -> list[PauliRow]:
        d = self.to_dense()
        n = self.n
        return [PauliRow(r[:n], r[n : 2 * n], SymbolicPhase(r[2 * n :].copy())) for r in d]

    def stabilizers(self) -> list[PauliRow]:
        return self.rows()[self.n :]

    def destabilizers(self) -> list[PauliRow]:
        return self.rows()[: self.n]

    def check_invariants(self) -> None:
        """Raise unless the rows form a symplectic basis with the right pairing."""
        d = self.to_dense().astype(np.int64)
        n = self.n
        xs, zs = d[:, :n], d[:, n : 2 * n]
        sym = (xs @ zs.T + zs @ xs.T) % 2
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[np.arange(n), n + np.arange(n)] = 1
        expected[n + np.arange(n), np.arange(n)] = 1
        bad = np.argwhere(sym != expected)
        if bad.size:
            i, j = bad[0]
            raise TableauInvariantError(f"rows {i} and {j} have the wrong commutation relation")

    def dump(self) -> str:
        """Generators one per line, e.g. ``(-1)^{s2+s3} I Z Z I``; destabilizers, a rule, then stabilizers."""
        lines = []
        for i, r in enumerate(self.rows()):
            if i == self.n:
                lines.append("-" * (2 * self.n + 8))
            syms = r.phase.indices()
            expr = "+".join("1" if s == 0 else f"s{s}" for s in syms) or "0"
            lines.append(f"(-1)^{{{expr}}} " + " ".join(r.label()))
        return "\n".join(lines) + "\n"
