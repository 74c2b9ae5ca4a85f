"""Loop kernels compiled with numba; same signatures as the numpy backend."""

import numba
import numpy as np

from .._layout import TILE, TILE_BYTES, TILE_WORDS

NAME = "numba"

_jit = numba.njit(cache=True, nogil=True)


@_jit
def _byte(lr, lc, row_major):
    if row_major:
        return lr * TILE_WORDS + (lc >> 3)
    return (lc >> 3) * TILE + lr


@_jit
def _popcount(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((v * np.uint64(0x0101010101010101)) >> np.uint64(56))


@_jit
def transpose(data, to_row, n_tc):
    buf = np.empty(TILE_BYTES, dtype=np.uint8)
    for i in range(data.shape[0]):
        for j in range(n_tc):
            t = data[i, j]
            if to_row:
                for w in range(TILE_WORDS):
                    base = w * TILE
                    for r in range(TILE):
                        buf[r * TILE_WORDS + w] = t[base + r]
            else:
                for r in range(TILE):
                    base = r * TILE_WORDS
                    for w in range(TILE_WORDS):
                        buf[w * TILE + r] = t[base + w]
            t[:] = buf


@_jit
def read_col(data, c, row_major):
    tr = data.shape[0]
    out = np.empty(tr * TILE, dtype=np.uint8)
    tc = c >> 9
    lc = c & (TILE - 1)
    k = lc & 7
    for i in range(tr):
        t = data[i, tc]
        for r in range(TILE):
            out[i * TILE + r] = (t[_byte(r, lc, row_major)] >> k) & 1
    return out


@_jit
def xor_col(data, c, bits, row_major):
    tc = c >> 9
    lc = c & (TILE - 1)
    k = lc & 7
    for i in range(data.shape[0]):
        t = data[i, tc]
        for r in range(TILE):
            b = bits[i * TILE + r]
            if b:
                idx = _byte(r, lc, row_major)
                t[idx] ^= np.uint8(1 << k)


@_jit
def xor_col_col(data, dst, src, row_major):
    xor_col(data, dst, read_col(data, src, row_major), row_major)


@_jit
def and_cols(data, a, b, row_major):
    return read_col(data, a, row_major) & read_col(data, b, row_major)


@_jit
def gate_h(data, xc, zc, pc):
    kx = xc & 7
    kz = zc & 7
    kp = pc & 7
    for i in range(data.shape[0]):
        tx = data[i, xc >> 9]
        tz = data[i, zc >> 9]
        tp = data[i, pc >> 9]
        ox = ((xc & (TILE - 1)) >> 3) * TILE
        oz = ((zc & (TILE - 1)) >> 3) * TILE
        op = ((pc & (TILE - 1)) >> 3) * TILE
        for r in range(TILE):
            x = (tx[ox + r] >> kx) & 1
            z = (tz[oz + r] >> kz) & 1
            if x & z:
                tp[op + r] ^= np.uint8(1 << kp)
            if x ^ z:
                tx[ox + r] ^= np.uint8(1 << kx)
                tz[oz + r] ^= np.uint8(1 << kz)


@_jit
def gate_s(data, xc, zc, pc):
    kx = xc & 7
    kz = zc & 7
    kp = pc & 7
    for i in range(data.shape[0]):
        tx = data[i, xc >> 9]
        tz = data[i, zc >> 9]
        tp = data[i, pc >> 9]
        ox = ((xc & (TILE - 1)) >> 3) * TILE
        oz = ((zc & (TILE - 1)) >> 3) * TILE
        op = ((pc & (TILE - 1)) >> 3) * TILE
        for r in range(TILE):
            x = (tx[ox + r] >> kx) & 1
            if x:
                z = (tz[oz + r] >> kz) & 1
                if z:
                    tp[op + r] ^= np.uint8(1 << kp)
                tz[oz + r] ^= np.uint8(1 << kz)


@_jit
def gate_s_dag(data, xc, zc, pc):
    kx = xc & 7
    kz = zc & 7
    kp = pc & 7
    for i in range(data.shape[0]):
        tx = data[i, xc >> 9]
        tz = data[i, zc >> 9]
        tp = data[i, pc >> 9]
        ox = ((xc & (TILE - 1)) >> 3) * TILE
        oz = ((zc & (TILE - 1)) >> 3) * TILE
        op = ((pc & (TILE - 1)) >> 3) * TILE
        for r in range(TILE):
            x = (tx[ox + r] >> kx) & 1
            if x:
                z = (tz[oz + r] >> kz) & 1
                if not z:
                    tp[op + r] ^= np.uint8(1 << kp)
                tz[oz + r] ^= np.uint8(1 << kz)


@_jit
def gate_cx(data, xa, za, xb, zb, pc):
    k1 = xa & 7
    k2 = za & 7
    k3 = xb & 7
    k4 = zb & 7
    kp = pc & 7
    o1 = ((xa & (TILE - 1)) >> 3) * TILE
    o2 = ((za & (TILE - 1)) >> 3) * TILE
    o3 = ((xb & (TILE - 1)) >> 3) * TILE
    o4 = ((zb & (TILE - 1)) >> 3) * TILE
    op = ((pc & (TILE - 1)) >> 3) * TILE
    for i in range(data.shape[0]):
        t1 = data[i, xa >> 9]
        t2 = data[i, za >> 9]
        t3 = data[i, xb >> 9]
        t4 = data[i, zb >> 9]
        tp = data[i, pc >> 9]
        for r in range(TILE):
            x1 = (t1[o1 + r] >> k1) & 1
            z2 = (t4[o4 + r] >> k4) & 1
            if x1 == 0 and z2 == 0:
                continue
            z1 = (t2[o2 + r] >> k2) & 1
            x2 = (t3[o3 + r] >> k3) & 1
            if x1 & z2 & (x2 ^ z1 ^ 1):
                tp[op + r] ^= np.uint8(1 << kp)
            if x1:
                t3[o3 + r] ^= np.uint8(1 << k3)
            if z2:
                t2[o2 + r] ^= np.uint8(1 << k2)


@_jit
def pauli_phase(data, dst, m1, m2, row_major):
    mask = read_col(data, m1, row_major)
    if m2 >= 0:
        mask ^= read_col(data, m2, row_major)
    xor_col(data, dst, mask, row_major)


@_jit
def _mul_counts(sa, ta, qt):
    """(cyclic-pair count, anticommuting count) for source row sa times target row ta."""
    plus = 0
    anti = 0
    for j in range(qt):
        for w in range(8):
            xa = sa[j, w]
            za = sa[qt + j, w]
            xb = ta[j, w]
            zb = ta[qt + j, w]
            an = (xa & zb) ^ (za & xb)
            if an:
                pl = (xa & ~za & xb & zb) | (xa & za & ~xb & zb) | (~xa & za & xb & ~zb)
                plus += _popcount(pl)
                anti += _popcount(an)
    return plus, anti


@_jit
def _seg(words, r):
    # (tile_cols, 8) uint64 view of logical row r
    return words[r >> 9, :, (r & (TILE - 1)) * 8 : (r & (TILE - 1)) * 8 + 8]


@_jit
def rowsum_many(data, targets, src, qt, n_tc):
    words = data.view(np.uint64).reshape(data.shape[0], data.shape[1], TILE_BYTES // 8)
    s = _seg(words, src)
    for ii in range(targets.size):
        t = _seg(words, targets[ii])
        plus, anti = _mul_counts(s, t, qt)
        if anti & 1:
            return False
        for j in range(n_tc):
            for w in range(8):
                t[j, w] ^= s[j, w]
        if ((2 * plus - anti) & 3) == 2:
            t[2 * qt, 0] ^= np.uint64(1)
    return True


@_jit
def row_product(data, rows, qt, n_tc):
    words = data.view(np.uint64).reshape(data.shape[0], data.shape[1], TILE_BYTES // 8)
    acc = np.zeros((n_tc, 8), dtype=np.uint64)
    total = 0
    for ii in range(rows.size):
        s = _seg(words, rows[ii])
        plus, anti = _mul_counts(s, acc, qt)
        if anti & 1:
            return acc.view(np.uint8).reshape(-1), False
        total += 2 * plus - anti
        for j in range(n_tc):
            for w in range(8):
                acc[j, w] ^= s[j, w]
    if (total & 3) == 2:
        acc[2 * qt, 0] ^= np.uint64(1)
    return acc.view(np.uint8).reshape(-1), True


@_jit
def row_copy(data, dst, src, n_tc):
    do = (dst & (TILE - 1)) * TILE_WORDS
    so = (src & (TILE - 1)) * TILE_WORDS
    for j in range(n_tc):
        d = data[dst >> 9, j]
        s = data[src >> 9, j]
        for w in range(TILE_WORDS):
            d[do + w] = s[so + w]


@_jit
def row_clear(data, r, n_tc):
    o = (r & (TILE - 1)) * TILE_WORDS
    for j in range(n_tc):
        d = data[r >> 9, j]
        for w in range(TILE_WORDS):
            d[o + w] = 0


@_jit
def row_xor(data, dst, src):
    do = (dst & (TILE - 1)) * TILE_WORDS
    so = (src & (TILE - 1)) * TILE_WORDS
    for j in range(data.shape[1]):
        d = data[dst >> 9, j]
        s = data[src >> 9, j]
        for w in range(TILE_WORDS):
            d[do + w] ^= s[so + w]


@_jit
def sparse_multiply(b_data, indptr, indices, out_data):
    bw = b_data.view(np.uint64).reshape(b_data.shape[0], b_data.shape[1], TILE_BYTES // 8)
    ow = out_data.view(np.uint64).reshape(out_data.shape[0], out_data.shape[1], TILE_BYTES // 8)
    tc = b_data.shape[1]
    for i in range(indptr.size - 1):
        o = _seg(ow, i)
        for p in range(indptr[i], indptr[i + 1]):
            s = _seg(bw, indices[p])
            for j in range(tc):
                for w in range(8):
                    o[j, w] ^= s[j, w]


@_jit
def dense_multiply(a_data, b_data, out_data):
    # Four Russians over 8-row groups of each b tile.
    tra = a_data.shape[0]
    tk = a_data.shape[1]
    tcb = b_data.shape[1]
    table = np.empty((256, 8), dtype=np.uint64)
    acc = np.empty((TILE, 8), dtype=np.uint64)
    for i in range(tra):
        for j in range(tcb):
            acc[:] = 0
            for t in range(tk):
                a = a_data[i, t]
                bw = b_data[t, j].view(np.uint64)
                for g in range(TILE_WORDS):
                    table[0, :] = 0
                    for v in range(1, 256):
                        low = v & -v
                        bit = 0
                        while (1 << bit) != low:
                            bit += 1
                        row = (g * 8 + bit) * 8
                        for w in range(8):
                            table[v, w] = table[v ^ low, w] ^ bw[row + w]
                    for r in range(TILE):
                        v = a[r * TILE_WORDS + g]
                        if v:
                            for w in range(8):
                                acc[r, w] ^= table[v, w]
            out_data[i, j] = acc.view(np.uint8).reshape(-1)
