"""Shot sampling: draw symbol assignments, then XOR them through the expressions.

Seeding: shots are processed in blocks of 512 (one tile column) and symbol
groups in chunks of :data:`GROUP_CHUNK`.  The uniforms for chunk ``c`` of
block ``b`` come from a Philox generator keyed by
``SeedSequence([seed, c, b])``, so any block can be produced on its own and
blocks can be drawn in any order or in parallel with identical results.
Output is reproducible for a fixed (seed, circuit, shot count) within this
package; nothing is promised across implementations.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._layout import TILE, TILE_WORDS, n_tiles
from .bitmatrix import ROW, TiledBitMatrix, gf2_multiply_sparse
from .tableau import SymbolRegistry

GROUP_CHUNK = 4096
_MASK64 = (1 << 64) - 1


@dataclass
class SymbolAssignmentBatch:
    """(n_symbols x shots) bits; row 0 (the constant symbol) is all ones."""

    data: TiledBitMatrix

    @property
    def n_symbols(self) -> int:
        return self.data.rows

    @property
    def shots(self) -> int:
        return self.data.cols

    def to_dense(self) -> np.ndarray:
        return self.data.to_dense()


@dataclass
class SampleMatrix:
    """(n_measurements x shots) outcome bits; column j is shot j."""

    data: TiledBitMatrix
    measurement_order: list[int]

    @property
    def n_measurements(self) -> int:
        return self.data.rows

    @property
    def shots(self) -> int:
        return self.data.cols

    def to_dense(self) -> np.ndarray:
        return self.data.to_dense()

    def shots_major(self) -> np.ndarray:
        """(shots, n_measurements) uint8 array."""
        return np.ascontiguousarray(self.to_dense().T)


class _GroupTable:
    """Flat per-group parameters used to turn uniforms into symbol bits."""

    def __init__(self, registry: SymbolRegistry):
        groups = registry.groups[1:]  # group 0 is the constant
        self.p = np.array([g.param for g in groups], dtype=np.float64)
        # number of non-identity patterns: 1 for bernoulli, 2**arity - 1 otherwise
        self.m = np.array([1 if g.distribution == "bernoulli" else (1 << g.arity) - 1 for g in groups], dtype=np.int64)
        self.arity = np.array([g.arity for g in groups], dtype=np.int64)
        self.first = np.array([g.symbols[0] for g in groups], dtype=np.int64)

    def __len__(self):
        return self.p.size


def _patterns(u: np.ndarray, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Pattern index for uniforms ``u``: 0 when ``u >= p``, else uniform over 1..m."""
    fired = u < p
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.floor(np.where(fired, u / np.where(p > 0, p, 1.0), 0.0) * m).astype(np.int64)
    return np.where(fired, np.minimum(k, m - 1) + 1, 0)


def _generator(seed: int, chunk: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence([seed & _MASK64, chunk, block])
    return np.random.Generator(np.random.Philox(ss))


def _draw_block(table: _GroupTable, n_symbols: int, seed: int, block: int, width: int) -> np.ndarray:
    """Packed rows (n_symbols, 64) for one 512-shot block; ``width`` shots are live."""
    bits = np.zeros((n_symbols, TILE), dtype=np.uint8)
    bits[0, :width] = 1
    for chunk, lo in enumerate(range(0, len(table), GROUP_CHUNK)):
        hi = min(lo + GROUP_CHUNK, len(table))
        u = _generator(seed, chunk, block).random((hi - lo, TILE))
        u[:, width:] = 1.0
        p = table.p[lo:hi]
        # only fired (group, shot) entries carry symbol bits
        g, col = np.nonzero(u < p[:, None])
        g_abs = g + lo
        k = _patterns(u[g, col], table.p[g_abs], table.m[g_abs])
        first = table.first[g_abs]
        for j in range(int(table.arity[lo:hi].max(initial=0))):
            sel = ((k >> j) & 1).astype(bool)
            bits[first[sel] + j, col[sel]] = 1
    return np.packbits(bits, axis=1, bitorder="little")


def draw_assignments(registry: SymbolRegistry, n_smp: int, seed: int, workers: int = 1) -> SymbolAssignmentBatch:
    if n_smp < 1:
        raise ValueError("need at least one shot")
    n_symbols = len(registry)
    table = _GroupTable(registry)
    out = TiledBitMatrix(n_symbols, n_smp, ROW)
    rows = np.arange(n_symbols)
    n_blocks = n_tiles(n_smp)
    rv = out.data.reshape(out.data.shape[0], n_blocks, TILE, TILE_WORDS)

    def fill(block):
        width = min(TILE, n_smp - block * TILE)
        rv[rows >> 9, block, rows & (TILE - 1), :] = _draw_block(table, n_symbols, seed, block, width)

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(workers) as pool:
            list(pool.map(fill, range(n_blocks)))
    else:
        for b in range(n_blocks):
            fill(b)
    return SymbolAssignmentBatch(out)


def sample(expressions, batch: SymbolAssignmentBatch) -> SampleMatrix:
    """Outcome row k is the XOR of the assignment rows named by ``expressions[k]``."""
    rows = [tuple(e) for e in expressions]
    return SampleMatrix(gf2_multiply_sparse(rows, batch.data), list(range(len(rows))))


def sample_compiled(compiled, shots: int, seed: int, workers: int = 1) -> SampleMatrix:
    return sample(compiled.expressions, draw_assignments(compiled.registry, shots, seed, workers))


def encode_shots(m: SampleMatrix, fmt: str = "01", chunk: int = 8192) -> bytes:
    """'01': one text line per shot; 'b8': ceil(n_m/8) LSB-first bytes per shot."""
    if fmt not in ("01", "b8"):
        raise ValueError(f"unknown shot format {fmt!r}")
    n_m, shots = m.n_measurements, m.shots
    if shots == 0:
        return b""
    packed = m.data.packed_rows() if n_m else np.zeros((0, -(-shots // 8)), dtype=np.uint8)
    chunk = max(8, chunk - chunk % 8)
    parts = []
    for lo in range(0, shots, chunk):
        hi = min(lo + chunk, shots)
        bits = np.unpackbits(packed[:, lo // 8 : -(-hi // 8)], axis=1, bitorder="little")[:, : hi - lo]
        per_shot = np.ascontiguousarray(bits.T)  # (hi-lo, n_m)
        if fmt == "01":
            text = np.empty((hi - lo, n_m + 1), dtype=np.uint8)
            text[:, :n_m] = per_shot + ord("0")
            text[:, n_m] = ord("\n")
            parts.append(text.tobytes())
        else:
            parts.append(np.packbits(per_shot, axis=1, bitorder="little").tobytes() if n_m else b"")
    return b"".join(parts)
