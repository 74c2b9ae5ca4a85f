"""Tile geometry shared by the storage class and the kernels."""

TILE = 512
TILE_WORDS = TILE // 8  # 8-bit words per 512-bit row segment
TILE_BYTES = TILE * TILE_WORDS  # 32768
SEG_U64 = TILE_WORDS // 8  # uint64 words per row segment


def n_tiles(bits: int) -> int:
    return -(-bits // TILE)
