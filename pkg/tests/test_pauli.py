import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symstab.errors import TableauInvariantError
from symstab.pauli import I, X, Y, Z, PauliRow, PauliXZ, SymbolicPhase, commutes, row_multiply_into, single_qubit_phase_exponent

MATS = {
    I: np.eye(2, dtype=complex),
    X: np.array([[0, 1], [1, 0]], dtype=complex),
    Z: np.array([[1, 0], [0, -1]], dtype=complex),
    Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def row_matrix(row: PauliRow) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for x, z in zip(row.xs, row.zs):
        m = np.kron(m, MATS[PauliXZ(int(x), int(z))])
    sign = -1 if row.phase.bits[0] else 1
    return sign * m


@pytest.mark.parametrize("a,b", list(itertools.product([I, X, Z, Y], repeat=2)))
def test_phase_exponent_matches_matrix_product(a, b):
    g = single_qubit_phase_exponent(a, b)
    assert g in (-1, 0, 1)
    c = PauliXZ(a.x ^ b.x, a.z ^ b.z)
    np.testing.assert_allclose(MATS[a] @ MATS[b], (1j**g) * MATS[c])


def test_phase_exponent_examples():
    assert single_qubit_phase_exponent(I, Y) == 0
    assert single_qubit_phase_exponent(Y, Y) == 0
    # XZ = -iY and ZX = iY
    assert single_qubit_phase_exponent(X, Z) == -1
    assert single_qubit_phase_exponent(Z, X) == 1


def test_labels_round_trip():
    for p, ch in ((I, "I"), (X, "X"), (Z, "Z"), (Y, "Y")):
        assert p.label == ch
        assert PauliXZ.from_label(ch) == p


def test_square_is_identity():
    t = PauliRow.from_label("Z", width=1)
    row_multiply_into(t, PauliRow.from_label("Z", width=1))
    assert t.label() == "I"
    assert t.phase.indices() == ()


def test_anticommuting_product_raises():
    t = PauliRow.from_label("X", width=1)
    with pytest.raises(TableauInvariantError):
        row_multiply_into(t, PauliRow.from_label("Z", width=1))


def test_sign_from_two_qubit_product():
    # (ZX)(XZ): ZX = iY on qubit 0, XZ = -iY on qubit 1, so +YY
    t = PauliRow.from_label("XZ", width=1)
    row_multiply_into(t, PauliRow.from_label("ZX", width=1))
    assert t.label() == "YY"
    assert t.phase.indices() == ()
    # (XX)(ZZ): (-iY)(-iY) = -YY
    t = PauliRow.from_label("ZZ", width=1)
    row_multiply_into(t, PauliRow.from_label("XX", width=1))
    assert t.label() == "YY"
    assert t.phase.indices() == (0,)


def test_symbolic_phases_xor():
    t = PauliRow.from_label("ZZ", width=4, symbols=(1,))
    row_multiply_into(t, PauliRow.from_label("XX", width=4, symbols=(0, 2)))
    # s1 ^ (1 ^ s2) ^ c, with c = 1 from the -YY sign
    assert t.phase.indices() == (1, 2)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        row_multiply_into(PauliRow.from_label("X"), PauliRow.from_label("XX"))
    with pytest.raises(ValueError):
        PauliRow([1, 0], [1])


def _rows(n):
    pauli = st.sampled_from("IXYZ")
    return st.lists(st.text(pauli, min_size=n, max_size=n), min_size=3, max_size=3)


@given(st.integers(1, 4).flatmap(_rows), st.lists(st.booleans(), min_size=3, max_size=3))
def test_products_agree_with_matrices(labels, signs):
    rows = [PauliRow.from_label(lb, width=1, symbols=(0,) if s else ()) for lb, s in zip(labels, signs)]
    a, b, c = rows
    if not (commutes(a, b) and commutes(a, c) and commutes(b, c)):
        with pytest.raises(TableauInvariantError):
            if not commutes(a, b):
                row_multiply_into(b.copy(), a)
            elif not commutes(a, c):
                row_multiply_into(c.copy(), a)
            else:
                row_multiply_into(c.copy(), b)
        return
    # b := a*b matches the matrix product exactly
    ab = row_multiply_into(b.copy(), a)
    np.testing.assert_allclose(row_matrix(ab), row_matrix(a) @ row_matrix(b), atol=1e-12)
    # associativity: (a*b)*c == a*(b*c)
    left = row_multiply_into(c.copy(), ab)
    right = row_multiply_into(row_multiply_into(c.copy(), b), a)
    assert left.label() == right.label()
    assert left.phase == right.phase


def test_symbolic_phase_helpers():
    p = SymbolicPhase.of(5, 1, 3) ^ SymbolicPhase.of(5, 3, 4)
    assert p.indices() == (1, 4)
    assert SymbolicPhase.zeros(3) == SymbolicPhase.of(3)
