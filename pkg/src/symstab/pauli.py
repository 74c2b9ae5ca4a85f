"""Pauli strings as x/z bit pairs with XOR-expression phases.

This is the unpacked, one-row-at-a-time form of the arithmetic the tableau
kernels perform on packed storage; tests use it as the reference for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import TableauInvariantError


class PauliXZ(NamedTuple):
    x: int
    z: int

    @property
    def label(self) -> str:
        return "IZXY"[2 * self.x + self.z]

    @classmethod
    def from_label(cls, label: str) -> PauliXZ:
        return {"I": I, "X": X, "Z": Z, "Y": Y}[label.upper()]


I = PauliXZ(0, 0)
X = PauliXZ(1, 0)
Z = PauliXZ(0, 1)
Y = PauliXZ(1, 1)


def single_qubit_phase_exponent(a: PauliXZ, b: PauliXZ) -> int:
    """Exponent g with sigma(a) @ sigma(b) == i**g * sigma(a xor b)."""
    xa, za = a
    xb, zb = b
    if not xa and not za:
        return 0
    if xa and za:
        return zb - xb
    if xa:
        return zb * (2 * xb - 1)
    return xb * (1 - 2 * zb)


@dataclass
class SymbolicPhase:
    """XOR expression over symbols; ``bits[0]`` is the constant term."""

    bits: np.ndarray

    @classmethod
    def zeros(cls, width: int) -> SymbolicPhase:
        return cls(np.zeros(width, dtype=np.uint8))

    @classmethod
    def of(cls, width: int, *symbols: int) -> SymbolicPhase:
        p = cls.zeros(width)
        for s in symbols:
            p.bits[s] ^= 1
        return p

    def __xor__(self, other: SymbolicPhase) -> SymbolicPhase:
        return SymbolicPhase(self.bits ^ other.bits)

    def indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.bits))

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolicPhase) and np.array_equal(self.bits, other.bits)


@dataclass
class PauliRow:
    xs: np.ndarray
    zs: np.ndarray
    phase: SymbolicPhase = field(default=None)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.uint8)
        self.zs = np.asarray(self.zs, dtype=np.uint8)
        if self.xs.shape != self.zs.shape:
            raise ValueError("xs and zs must have the same length")
        if self.phase is None:
            self.phase = SymbolicPhase.zeros(1)

    @property
    def n(self) -> int:
        return self.xs.size

    @classmethod
    def from_label(cls, label: str, width: int = 1, symbols=()) -> PauliRow:
        ps = [PauliXZ.from_label(ch) for ch in label]
        return cls([p.x for p in ps], [p.z for p in ps], SymbolicPhase.of(width, *symbols))

    def label(self) -> str:
        return "".join(PauliXZ(int(x), int(z)).label for x, z in zip(self.xs, self.zs))

    def copy(self) -> PauliRow:
        return PauliRow(self.xs.copy(), self.zs.copy(), SymbolicPhase(self.phase.bits.copy()))


def row_multiply_into(target: PauliRow, source: PauliRow) -> PauliRow:
    """Replace ``target`` with ``source * target`` (in place) and return it.

    Both rows must describe commuting Hermitian Paulis, so the i-exponent
    accumulated over qubits is even; an odd total raises.
    """
    if target.n != source.n or target.phase.bits.size != source.phase.bits.size:
        raise ValueError("rows differ in qubit count or phase width")
    total = sum(
        single_qubit_phase_exponent(PauliXZ(int(xs), int(zs)), PauliXZ(int(xt), int(zt)))
        for xs, zs, xt, zt in zip(source.xs, source.zs, target.xs, target.zs)
    )
    if total % 2:
        raise TableauInvariantError("row product has an imaginary phase; rows anticommute")
    target.xs ^= source.xs
    target.zs ^= source.zs
    target.phase = target.phase ^ source.phase
    if total % 4 == 2:
        target.phase.bits[0] ^= 1
    return target


def commutes(a: PauliRow, b: PauliRow) -> bool:
    return int(np.sum(a.xs & b.zs) + np.sum(a.zs & b.xs)) % 2 == 0
