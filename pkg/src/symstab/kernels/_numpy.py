"""Vectorized numpy kernels over tiled bit storage.

Storage is a uint8 array of shape ``(tile_rows, tile_cols, 32768)``.  In
column-major orientation a tile is a 64x512 byte array indexed
``[word_col, row]``; in row-major orientation it is 512x64 indexed
``[row, word_col]``.  Bit ``k`` of a word holds column ``8*word_col + k``.
"""

import numpy as np

from .._layout import TILE, TILE_BYTES, TILE_WORDS

NAME = "numpy"


def _col_view(data):
    return data.reshape(data.shape[0], data.shape[1], TILE_WORDS, TILE)


def _row_view(data):
    return data.reshape(data.shape[0], data.shape[1], TILE, TILE_WORDS)


def _strip(data, c, row_major):
    t, lc = divmod(c, TILE)
    if row_major:
        return _row_view(data)[:, t, :, lc >> 3], lc & 7
    return _col_view(data)[:, t, lc >> 3, :], lc & 7


def transpose(data, to_row, n_tc):
    tr = data.shape[0]
    sub = data[:, :n_tc]
    if to_row:
        moved = sub.reshape(tr, n_tc, TILE_WORDS, TILE).transpose(0, 1, 3, 2)
    else:
        moved = sub.reshape(tr, n_tc, TILE, TILE_WORDS).transpose(0, 1, 3, 2)
    data[:, :n_tc] = moved.reshape(tr, n_tc, TILE_BYTES)


def read_col(data, c, row_major):
    s, k = _strip(data, c, row_major)
    return ((s >> k) & 1).reshape(-1)


def xor_col(data, c, bits, row_major):
    s, k = _strip(data, c, row_major)
    s ^= (bits.reshape(s.shape).astype(np.uint8) << np.uint8(k))


def xor_col_col(data, dst, src, row_major):
    xor_col(data, dst, read_col(data, src, row_major), row_major)


def and_cols(data, a, b, row_major):
    return read_col(data, a, row_major) & read_col(data, b, row_major)


def gate_h(data, xc, zc, pc):
    x = read_col(data, xc, False)
    z = read_col(data, zc, False)
    xor_col(data, pc, x & z, False)
    d = x ^ z
    xor_col(data, xc, d, False)
    xor_col(data, zc, d, False)


def gate_s(data, xc, zc, pc):
    x = read_col(data, xc, False)
    z = read_col(data, zc, False)
    xor_col(data, pc, x & z, False)
    xor_col(data, zc, x, False)


def gate_s_dag(data, xc, zc, pc):
    x = read_col(data, xc, False)
    z = read_col(data, zc, False) ^ x
    xor_col(data, zc, x, False)
    xor_col(data, pc, x & z, False)


def gate_cx(data, xa, za, xb, zb, pc):
    x1 = read_col(data, xa, False)
    z1 = read_col(data, za, False)
    x2 = read_col(data, xb, False)
    z2 = read_col(data, zb, False)
    xor_col(data, pc, x1 & z2 & (x2 ^ z1 ^ 1), False)
    xor_col(data, xb, x1, False)
    xor_col(data, za, z2, False)


def pauli_phase(data, dst, m1, m2, row_major):
    mask = read_col(data, m1, row_major)
    if m2 >= 0:
        mask = mask ^ read_col(data, m2, row_major)
    xor_col(data, dst, mask, row_major)


def _phase_counts(xa, za, xb, zb):
    """Per-row (cyclic-pair count, anticommuting count) for source a times target b."""
    anti = (xa & zb) ^ (za & xb)
    plus = (xa & ~za & xb & zb) | (xa & za & ~xb & zb) | (~xa & za & xb & ~zb)
    return (
        np.bitwise_count(plus).sum(axis=-1, dtype=np.int64),
        np.bitwise_count(anti).sum(axis=-1, dtype=np.int64),
    )


def _rows(data, rows, n_tc):
    return _row_view(data)[rows >> 9, :n_tc, rows & (TILE - 1), :]


def rowsum_many(data, targets, src, qt, n_tc):
    if targets.size == 0:
        return True
    tgt = _rows(data, targets, n_tc)
    s = _row_view(data)[src >> 9, :n_tc, src & (TILE - 1), :]
    k = targets.size
    tw = tgt[:, : 2 * qt].view(np.uint64).reshape(k, 2, -1)
    sw = s[: 2 * qt].view(np.uint64).reshape(2, -1)
    plus, anti = _phase_counts(sw[0], sw[1], tw[:, 0], tw[:, 1])
    if np.any(anti & 1):
        return False
    flip = (((2 * plus - anti) & 3) == 2).astype(np.uint8)
    out = tgt ^ s
    out[:, 2 * qt, 0] ^= flip
    _row_view(data)[targets >> 9, :n_tc, targets & (TILE - 1), :] = out
    return True


def row_product(data, rows, qt, n_tc):
    acc = np.zeros(n_tc * TILE_WORDS, dtype=np.uint8)
    if rows.size == 0:
        return acc, True
    seg = _rows(data, rows, n_tc)
    k = rows.size
    w = seg[:, : 2 * qt].view(np.uint64).reshape(k, 2, -1)
    # prefix[j] = product of rows[:j] (bits only)
    prefix = np.zeros_like(w)
    if k > 1:
        prefix[1:] = np.bitwise_xor.accumulate(w[:-1], axis=0)
    plus, anti = _phase_counts(w[:, 0], w[:, 1], prefix[:, 0], prefix[:, 1])
    if np.any(anti & 1):
        return acc, False
    total = int((2 * plus - anti).sum()) & 3
    acc[:] = np.bitwise_xor.reduce(seg, axis=0).reshape(-1)
    if total == 2:
        acc[2 * qt * TILE_WORDS] ^= 1
    return acc, True


def row_copy(data, dst, src, n_tc):
    rv = _row_view(data)
    rv[dst >> 9, :n_tc, dst & (TILE - 1), :] = rv[src >> 9, :n_tc, src & (TILE - 1), :]


def row_clear(data, r, n_tc):
    _row_view(data)[r >> 9, :n_tc, r & (TILE - 1), :] = 0


def row_xor(data, dst, src):
    rv = _row_view(data)
    rv[dst >> 9, :, dst & (TILE - 1), :] ^= rv[src >> 9, :, src & (TILE - 1), :]


def sparse_multiply(b_data, indptr, indices, out_data):
    brv = _row_view(b_data)
    orv = _row_view(out_data)
    n_rows = indptr.size - 1
    per_row_bytes = b_data.shape[1] * TILE_WORDS
    budget = max(1, (1 << 26) // max(per_row_bytes, 1))
    lo = 0
    while lo < n_rows:
        hi = lo + 1
        while hi < n_rows and indptr[hi + 1] - indptr[lo] <= budget:
            hi += 1
        sel = indices[indptr[lo] : indptr[hi]]
        if sel.size:
            gathered = brv[sel >> 9, :, sel & (TILE - 1), :]
            lengths = np.diff(indptr[lo : hi + 1])
            nonempty = np.flatnonzero(lengths)
            starts = (indptr[lo:hi] - indptr[lo])[nonempty]
            red = np.bitwise_xor.reduceat(gathered, starts, axis=0)
            rows = lo + nonempty
            orv[rows >> 9, :, rows & (TILE - 1), :] = red
        lo = hi


def _tile_bits(data, i, j):
    raw = data[i, j].reshape(TILE, TILE_WORDS)
    return np.unpackbits(raw, axis=1, bitorder="little")


def dense_multiply(a_data, b_data, out_data):
    tra, tk = a_data.shape[:2]
    tcb = b_data.shape[1]
    b_tiles = [[_tile_bits(b_data, t, j).astype(np.float32) for j in range(tcb)] for t in range(tk)]
    for i in range(tra):
        a_tiles = [_tile_bits(a_data, i, t).astype(np.float32) for t in range(tk)]
        for j in range(tcb):
            acc = np.zeros((TILE, TILE), dtype=np.float32)
            for t in range(tk):
                acc += a_tiles[t] @ b_tiles[t][j]
                np.fmod(acc, 2.0, out=acc)
            bits = acc.astype(np.uint8)
            out_data[i, j] = np.packbits(bits, axis=1, bitorder="little").reshape(-1)
