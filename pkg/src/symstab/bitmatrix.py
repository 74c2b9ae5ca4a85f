"""Bit matrices stored as a grid of 512x512-bit tiles.

Each tile holds 32768 bytes.  Every byte is a 1x8 run of bits from one row
(bit ``k`` is column ``8*w + k``, least-significant bit first).  In
``COLUMN`` orientation the bytes of a tile are laid out column-major as a
512x64 byte matrix, so the eight columns sharing a byte column are a
contiguous 512-byte strip.  ``local_transpose`` rewrites every tile to
row-major order, after which each 512-bit row segment is 64 contiguous
bytes.  Reads through :meth:`TiledBitMatrix.get_bit` do not depend on the
orientation.
"""

from __future__ import annotations

import enum

import numpy as np

from . import kernels
from ._layout import TILE, TILE_BYTES, TILE_WORDS, n_tiles
from .errors import OrientationError


class Orientation(str, enum.Enum):
    COLUMN = "column-major-tiles"
    ROW = "row-major-tiles"


COLUMN = Orientation.COLUMN
ROW = Orientation.ROW


class TiledBitMatrix:
    def __init__(self, rows: int, cols: int, orientation: Orientation = COLUMN):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        self.orientation = Orientation(orientation)
        self.data = np.zeros((n_tiles(rows), n_tiles(cols), TILE_BYTES), dtype=np.uint8)

    @property
    def row_major(self) -> bool:
        return self.orientation is ROW

    @property
    def tile_shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    def copy(self) -> TiledBitMatrix:
        m = TiledBitMatrix.__new__(TiledBitMatrix)
        m.rows, m.cols, m.orientation = self.rows, self.cols, self.orientation
        m.data = self.data.copy()
        return m

    # -- element access ----------------------------------------------------

    def _locate(self, r: int, c: int) -> tuple[int, int, int, int]:
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"bit ({r}, {c}) outside {self.rows}x{self.cols} matrix")
        lr, lc = r % TILE, c % TILE
        if self.row_major:
            byte = lr * TILE_WORDS + (lc >> 3)
        else:
            byte = (lc >> 3) * TILE + lr
        return r // TILE, c // TILE, byte, lc & 7

    def get_bit(self, r: int, c: int) -> int:
        i, j, byte, k = self._locate(r, c)
        return int(self.data[i, j, byte] >> k) & 1

    def set_bit(self, r: int, c: int, value: int) -> None:
        i, j, byte, k = self._locate(r, c)
        if value:
            self.data[i, j, byte] |= np.uint8(1 << k)
        else:
            self.data[i, j, byte] &= np.uint8(~(1 << k) & 0xFF)

    def flip_bit(self, r: int, c: int) -> None:
        i, j, byte, k = self._locate(r, c)
        self.data[i, j, byte] ^= np.uint8(1 << k)

    # -- column operations ---------------------------------------------------

    def _check_col(self, c: int) -> None:
        if not 0 <= c < self.cols:
            raise IndexError(f"column {c} outside 0..{self.cols - 1}")

    def _check_row(self, r: int) -> None:
        if not 0 <= r < self.rows:
            raise IndexError(f"row {r} outside 0..{self.rows - 1}")

    def column(self, c: int) -> np.ndarray:
        """Column ``c`` as a 0/1 uint8 vector of length ``rows`` (any orientation)."""
        self._check_col(c)
        return kernels.backend.read_col(self.data, c, self.row_major)[: self.rows]

    def column_op_xor(self, dst_col: int, src_col: int) -> None:
        self._check_col(dst_col)
        self._check_col(src_col)
        if dst_col == src_col:
            raise ValueError("cannot xor a column into itself")
        if self.row_major:
            raise OrientationError("column operations need column-major tiles; call local_transpose first")
        kernels.backend.xor_col_col(self.data, dst_col, src_col, False)

    def column_select_and(self, col_a: int, col_b: int) -> np.ndarray:
        """Row-wise AND of two columns, packed LSB-first into ``ceil(rows/8)`` bytes."""
        self._check_col(col_a)
        self._check_col(col_b)
        if self.row_major:
            raise OrientationError("column operations need column-major tiles; call local_transpose first")
        bits = kernels.backend.and_cols(self.data, col_a, col_b, False)[: self.rows]
        return np.packbits(bits, bitorder="little")

    # -- row operations ------------------------------------------------------

    def row_op_xor(self, dst_row: int, src_row: int) -> None:
        self._check_row(dst_row)
        self._check_row(src_row)
        if dst_row == src_row:
            raise ValueError("cannot xor a row into itself")
        if not self.row_major:
            raise OrientationError("row operations need row-major tiles; call local_transpose first")
        kernels.backend.row_xor(self.data, dst_row, src_row)

    def row_segment(self, r: int, tile_col: int) -> np.ndarray:
        """The 64-byte storage of row ``r`` inside tile column ``tile_col`` (row-major only)."""
        if not self.row_major:
            raise OrientationError("row segments are contiguous only in row-major orientation")
        lr = r % TILE
        return self.data[r // TILE, tile_col, lr * TILE_WORDS : (lr + 1) * TILE_WORDS]

    # -- orientation ---------------------------------------------------------

    def local_transpose(self, active_tile_cols: int | None = None) -> None:
        """Flip every tile between column-major and row-major byte order.

        ``active_tile_cols`` limits the work to a prefix of tile columns; the
        caller guarantees the remaining tiles are all zero.
        """
        n_tc = self.data.shape[1] if active_tile_cols is None else min(active_tile_cols, self.data.shape[1])
        if self.data.shape[0] and n_tc:
            kernels.backend.transpose(self.data, not self.row_major, n_tc)
        self.orientation = COLUMN if self.row_major else ROW

    def ensure(self, orientation: Orientation, active_tile_cols: int | None = None) -> None:
        if self.orientation is not Orientation(orientation):
            self.local_transpose(active_tile_cols)

    # -- conversion ----------------------------------------------------------

    def to_dense(self) -> np.ndarray:
        """Logical contents as a (rows, cols) uint8 array of 0/1."""
        tr, tc = self.tile_shape
        if self.row_major:
            raw = self.data.reshape(tr, tc, TILE, TILE_WORDS)
        else:
            raw = self.data.reshape(tr, tc, TILE_WORDS, TILE).transpose(0, 1, 3, 2)
        bits = np.unpackbits(raw, axis=3, bitorder="little")  # (tr, tc, 512, 512)
        dense = bits.transpose(0, 2, 1, 3).reshape(tr * TILE, tc * TILE)
        return np.ascontiguousarray(dense[: self.rows, : self.cols])

    @classmethod
    def from_dense(cls, arr, orientation: Orientation = COLUMN) -> TiledBitMatrix:
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        rows, cols = arr.shape
        m = cls(rows, cols, ROW)
        tr, tc = m.tile_shape
        padded = np.zeros((tr * TILE, tc * TILE), dtype=np.uint8)
        padded[:rows, :cols] = arr != 0
        packed = np.packbits(padded, axis=1, bitorder="little")  # (tr*512, tc*64)
        m.data[:] = packed.reshape(tr, TILE, tc, TILE_WORDS).transpose(0, 2, 1, 3).reshape(tr, tc, TILE_BYTES)
        m.ensure(orientation)
        return m

    def packed_rows(self) -> np.ndarray:
        """Rows packed LSB-first, shape (rows, ceil(cols/8))."""
        tr, tc = self.tile_shape
        if self.row_major:
            raw = self.data.reshape(tr, tc, TILE, TILE_WORDS)
        else:
            raw = self.data.reshape(tr, tc, TILE_WORDS, TILE).transpose(0, 1, 3, 2)
        flat = raw.transpose(0, 2, 1, 3).reshape(tr * TILE, tc * TILE_WORDS)
        return np.ascontiguousarray(flat[: self.rows, : -(-self.cols // 8)])

    def padding_is_zero(self) -> bool:
        tr, tc = self.tile_shape
        probe = TiledBitMatrix.__new__(TiledBitMatrix)
        probe.rows, probe.cols, probe.orientation, probe.data = tr * TILE, tc * TILE, self.orientation, self.data
        full = probe.to_dense()
        return not full[self.rows :].any() and not full[:, self.cols :].any()

    def dump_text(self) -> str:
        """One line per row of '0'/'1' characters."""
        dense = self.to_dense()
        if dense.size == 0:
            return "\n" * self.rows
        chars = (dense + ord("0")).astype(np.uint8)
        return "".join(line.tobytes().decode() + "\n" for line in chars)

    @classmethod
    def load_text(cls, text: str, orientation: Orientation = COLUMN) -> TiledBitMatrix:
        lines = [ln.strip() for ln in text.splitlines()]
        if not lines:
            return cls(0, 0, orientation)
        width = len(lines[0])
        if any(len(ln) != width or set(ln) - {"0", "1"} for ln in lines):
            raise ValueError("bitmap text must be equal-length lines of '0'/'1'")
        arr = np.array([[ch == "1" for ch in ln] for ln in lines], dtype=np.uint8).reshape(len(lines), width)
        return cls.from_dense(arr, orientation)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TiledBitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(self.to_dense(), other.to_dense())

    def __repr__(self) -> str:
        return f"TiledBitMatrix({self.rows}x{self.cols}, {self.orientation.value})"


def _as_row_major(m: TiledBitMatrix) -> TiledBitMatrix:
    if m.row_major:
        return m
    c = m.copy()
    c.local_transpose()
    return c


def gf2_multiply(a: TiledBitMatrix, b: TiledBitMatrix) -> TiledBitMatrix:
    """Dense product over GF(2); result is returned in row-major orientation."""
    if a.cols != b.rows:
        raise ValueError(f"inner dimensions differ: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    out = TiledBitMatrix(a.rows, b.cols, ROW)
    a_r, b_r = _as_row_major(a), _as_row_major(b)
    if out.data.size and a_r.data.shape[1]:
        kernels.backend.dense_multiply(a_r.data, b_r.data, out.data)
    return out


def to_csr(a_rows, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Flatten per-row index lists into (indptr, indices), validating ``0 <= index < k``."""
    lengths = np.fromiter((len(r) for r in a_rows), dtype=np.int64, count=len(a_rows))
    indptr = np.zeros(len(a_rows) + 1, dtype=np.int64)
    np.cumsum(lengths, out=indptr[1:])
    if indptr[-1]:
        indices = np.concatenate([np.asarray(r, dtype=np.int64) for r in a_rows if len(r)])
    else:
        indices = np.zeros(0, dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= k):
        bad = indices[(indices < 0) | (indices >= k)][0]
        raise IndexError(f"row index {bad} outside 0..{k - 1}")
    return indptr, indices


def gf2_multiply_sparse(a_rows, b: TiledBitMatrix) -> TiledBitMatrix:
    """Row ``i`` of the result is the XOR of the rows of ``b`` listed in ``a_rows[i]``."""
    indptr, indices = to_csr(a_rows, b.rows)
    out = TiledBitMatrix(len(a_rows), b.cols, ROW)
    b_r = _as_row_major(b)
    if out.data.size:
        kernels.backend.sparse_multiply(b_r.data, indptr, indices, out.data)
    return out
