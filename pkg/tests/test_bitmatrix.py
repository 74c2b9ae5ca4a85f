import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symstab.bitmatrix import COLUMN, ROW, TiledBitMatrix, gf2_multiply, gf2_multiply_sparse, to_csr
from symstab.errors import OrientationError

SIZES = [511, 512, 513, 1024, 1537]


def naive_gf2(a, b):
    return (a.astype(np.int64) @ b.astype(np.int64)) % 2


def random_bits(rng, r, c, density=0.5):
    return (rng.random((r, c)) < density).astype(np.uint8)


def test_zero_matrix_reads_zero():
    m = TiledBitMatrix(700, 900)
    assert m.get_bit(0, 0) == 0 and m.get_bit(699, 899) == 0
    assert m.tile_shape == (2, 2)


def test_set_get_across_tile_boundary(backend):
    m = TiledBitMatrix(10, 1000)
    m.set_bit(5, 700, 1)
    assert m.get_bit(5, 700) == 1
    m.flip_bit(5, 700)
    assert m.get_bit(5, 700) == 0


def test_out_of_range_rejected():
    m = TiledBitMatrix(10, 20)
    with pytest.raises(IndexError):
        m.get_bit(10, 0)
    with pytest.raises(IndexError):
        m.set_bit(0, 20, 1)
    with pytest.raises(IndexError):
        m.column(-1)


@pytest.mark.parametrize("size", SIZES)
def test_dense_round_trip_both_orientations(backend, size):
    rng = np.random.default_rng(size)
    d = random_bits(rng, size, size + 7)
    for o in (COLUMN, ROW):
        m = TiledBitMatrix.from_dense(d, o)
        np.testing.assert_array_equal(m.to_dense(), d)
        assert m.padding_is_zero()


@pytest.mark.parametrize("size", SIZES)
def test_transpose_involution_and_reads(backend, size):
    rng = np.random.default_rng(size + 1)
    d = random_bits(rng, size, size)
    m = TiledBitMatrix.from_dense(d, COLUMN)
    before = m.data.copy()
    m.local_transpose()
    assert m.orientation is ROW
    np.testing.assert_array_equal(m.to_dense(), d)
    rs, cs = rng.integers(0, size, 1000), rng.integers(0, size, 1000)
    assert all(m.get_bit(r, c) == d[r, c] for r, c in zip(rs, cs))
    for c in rng.integers(0, size, 10):
        np.testing.assert_array_equal(m.column(c), d[:, c])
    m.local_transpose()
    assert m.orientation is COLUMN
    np.testing.assert_array_equal(m.data, before)


def test_transpose_makes_rows_contiguous():
    m = TiledBitMatrix(512, 512)
    m.set_bit(3, 200, 1)
    m.local_transpose()
    assert m.get_bit(3, 200) == 1
    seg = m.row_segment(3, 0)
    assert seg.size == 64
    np.testing.assert_array_equal(np.flatnonzero(np.unpackbits(seg, bitorder="little")), [200])
    m.local_transpose()
    with pytest.raises(OrientationError):
        m.row_segment(3, 0)


def test_large_transpose_random_positions(backend):
    rng = np.random.default_rng(7)
    d = random_bits(rng, 2048, 1536)
    m = TiledBitMatrix.from_dense(d, COLUMN)
    m.local_transpose()
    rs, cs = rng.integers(0, 2048, 10_000), rng.integers(0, 1536, 10_000)
    got = np.array([m.get_bit(r, c) for r, c in zip(rs, cs)])
    np.testing.assert_array_equal(got, d[rs, cs])


def test_column_op_examples():
    m = TiledBitMatrix.from_dense(np.eye(4, dtype=np.uint8))
    with pytest.raises(ValueError):
        m.column_op_xor(1, 1)
    m.column_op_xor(1, 0)
    np.testing.assert_array_equal(m.column(1), [1, 1, 0, 0])
    m.local_transpose()
    with pytest.raises(OrientationError):
        m.column_op_xor(2, 0)


@pytest.mark.parametrize("size", SIZES)
def test_column_ops_match_mirror(backend, size):
    rng = np.random.default_rng(size + 2)
    d = random_bits(rng, size, size)
    m = TiledBitMatrix.from_dense(d)
    for _ in range(100):
        a, b = rng.choice(size, 2, replace=False)
        m.column_op_xor(a, b)
        d[:, a] ^= d[:, b]
    np.testing.assert_array_equal(m.to_dense(), d)
    assert m.padding_is_zero()
    for _ in range(5):
        a, b = rng.integers(0, size, 2)
        packed = m.column_select_and(a, b)
        np.testing.assert_array_equal(np.unpackbits(packed, bitorder="little")[:size], d[:, a] & d[:, b])


def test_column_select_and_examples():
    d = np.zeros((9, 3), dtype=np.uint8)
    d[:, 0] = 1
    d[::2, 2] = 1
    m = TiledBitMatrix.from_dense(d)
    assert not m.column_select_and(0, 1).any()
    np.testing.assert_array_equal(m.column_select_and(2, 2), np.packbits(d[:, 2], bitorder="little"))


@pytest.mark.parametrize("size", SIZES)
def test_row_ops_match_mirror(backend, size):
    rng = np.random.default_rng(size + 3)
    d = random_bits(rng, size, size)
    m = TiledBitMatrix.from_dense(d, ROW)
    for _ in range(100):
        a, b = rng.choice(size, 2, replace=False)
        m.row_op_xor(a, b)
        d[a] ^= d[b]
    np.testing.assert_array_equal(m.to_dense(), d)
    with pytest.raises(ValueError):
        m.row_op_xor(0, 0)


def test_row_op_needs_row_orientation():
    with pytest.raises(OrientationError):
        TiledBitMatrix(4, 4, COLUMN).row_op_xor(0, 1)


def test_multiply_examples(backend):
    rng = np.random.default_rng(0)
    b = TiledBitMatrix.from_dense(random_bits(rng, 6, 9))
    ident = TiledBitMatrix.from_dense(np.eye(6, dtype=np.uint8))
    assert gf2_multiply(ident, b) == b
    ones = gf2_multiply(
        TiledBitMatrix.from_dense(np.ones((3, 3), np.uint8)), TiledBitMatrix.from_dense(np.ones((3, 1), np.uint8))
    )
    np.testing.assert_array_equal(ones.to_dense(), [[1], [1], [1]])
    with pytest.raises(ValueError):
        gf2_multiply(ident, TiledBitMatrix(5, 3))


@pytest.mark.parametrize("shape", [(100, 70, 200), (511, 513, 512), (1537, 1024, 513), (3, 1537, 1025)])
def test_dense_multiply_matches_naive(backend, shape):
    n_m, k, n_s = shape
    rng = np.random.default_rng(sum(shape))
    a, b = random_bits(rng, n_m, k), random_bits(rng, k, n_s)
    for oa, ob in ((COLUMN, ROW), (ROW, COLUMN)):
        out = gf2_multiply(TiledBitMatrix.from_dense(a, oa), TiledBitMatrix.from_dense(b, ob))
        np.testing.assert_array_equal(out.to_dense(), naive_gf2(a, b))
        assert out.padding_is_zero()


def test_sparse_multiply_examples(backend):
    rng = np.random.default_rng(1)
    d = random_bits(rng, 5, 40)
    b = TiledBitMatrix.from_dense(d, ROW)
    out = gf2_multiply_sparse([(), (3,), (0, 4)], b).to_dense()
    np.testing.assert_array_equal(out[0], 0)
    np.testing.assert_array_equal(out[1], d[3])
    np.testing.assert_array_equal(out[2], d[0] ^ d[4])
    with pytest.raises(IndexError):
        gf2_multiply_sparse([(5,)], b)


@pytest.mark.parametrize("size", SIZES)
def test_sparse_equals_dense(backend, size):
    rng = np.random.default_rng(size + 4)
    k = size
    rows = [tuple(sorted(rng.choice(k, rng.integers(0, 6), replace=False))) for _ in range(300)]
    dense_a = np.zeros((300, k), dtype=np.uint8)
    for i, r in enumerate(rows):
        dense_a[i, list(r)] = 1
    b = random_bits(rng, k, 700)
    bm = TiledBitMatrix.from_dense(b, ROW)
    sparse = gf2_multiply_sparse(rows, bm)
    dense = gf2_multiply(TiledBitMatrix.from_dense(dense_a), bm)
    assert sparse == dense
    np.testing.assert_array_equal(sparse.to_dense(), naive_gf2(dense_a, b))


def test_to_csr():
    indptr, indices = to_csr([(1, 2), (), (0,)], 3)
    np.testing.assert_array_equal(indptr, [0, 2, 2, 3])
    np.testing.assert_array_equal(indices, [1, 2, 0])


def test_text_dump_round_trip():
    rng = np.random.default_rng(5)
    d = random_bits(rng, 7, 13)
    m = TiledBitMatrix.from_dense(d)
    text = m.dump_text()
    assert text.splitlines()[0] == "".join(map(str, d[0]))
    assert TiledBitMatrix.load_text(text) == m
    with pytest.raises(ValueError):
        TiledBitMatrix.load_text("01\n012\n")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 1100), st.integers(1, 1100), st.integers(0, 2**32 - 1))
def test_orientation_invariant_reads(rows, cols, seed):
    rng = np.random.default_rng(seed)
    d = random_bits(rng, rows, cols, density=0.3)
    m = TiledBitMatrix.from_dense(d, COLUMN)
    m.local_transpose()
    np.testing.assert_array_equal(m.to_dense(), d)
    assert m.padding_is_zero()
    c = int(rng.integers(cols))
    np.testing.assert_array_equal(m.column(c), d[:, c])
