import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symstab.circuit import decompose_noise, format_circuit, make, parse_circuit, summarize
from symstab.engine import initialize
from symstab.errors import CircuitError
from symstab.sampler import draw_assignments, sample
from symstab.tableau import SymbolRegistry
from symstab.verify import random_circuit

BELL = "H 0\nCX 0 1\nX_ERROR(0.1) 0 1\nM 0 1"
GHZ = "H 0\nCX 0 1 1 2 2 3\nZ_ERROR(0.1) 0\nX_ERROR(0.1) 1 2 3\nCX 2 3 1 2 0 1\nH 0\nM 0 1 2 3\n"


def test_parse_worked_example():
    insts = parse_circuit(BELL)
    assert [i.kind for i in insts] == ["H", "CX", "X_ERROR", "M"]
    assert insts[2].param == 0.1 and insts[2].targets == (0, 1)
    assert insts[3].line == 4
    s = summarize(insts)
    assert (s.n_qubits, s.n_measurements, s.n_fault_symbols) == (2, 2, 2)


def test_empty_circuit():
    assert parse_circuit("") == []
    s = summarize([])
    assert (s.n_qubits, s.n_measurements, s.n_fault_symbols, s.n_resets) == (0, 0, 0, 0)


def test_ghz_summary():
    s = summarize(parse_circuit(GHZ))
    assert s.n_fault_symbols == 4 and s.n_measurements == 4


def test_aliases_comments_and_case():
    insts = parse_circuit("# header\ncnot 0 1  # trailing\n\nmz 1\nx_error( 0.25 ) 2\n")
    assert [str(i) for i in insts] == ["CX 0 1", "M 1", "X_ERROR(0.25) 2"]
    assert [i.line for i in insts] == [2, 4, 5]


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("CX 0 0", 1, "repeats"),
        ("H 0\nCX 0 1 2", 2, "even"),
        ("H 0\n\nFOO 1", 3, "unknown"),
        ("X_ERROR 0", 1, "probability"),
        ("X_ERROR(1.5) 0", 1, "outside"),
        ("X_ERROR(abc) 0", 1, "bad argument"),
        ("H(0.1) 0", 1, "no argument"),
        ("H -1", 1, "bad target"),
        ("H a", 1, "bad target"),
        ("M", 1, "at least one"),
        ("TICK 0", 1, "no targets"),
        ("REPEAT 3 {", 1, "not supported"),
        ("DETECTOR rec[-1]", 1, "not supported"),
        ("H 0\n}", 2, "not supported"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(CircuitError) as info:
        parse_circuit(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")
    assert fragment in str(info.value)


def test_canonical_printer():
    text = format_circuit(parse_circuit("h 0\nDEPOLARIZE2(0.1000) 0 1\nTICK\ns_dag 1\n"))
    assert text == "H 0\nDEPOLARIZE2(0.1) 0 1\nTICK\nS_DAG 1\n"


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 60), st.integers(0, 2**32 - 1))
def test_round_trip(n, length, seed):
    insts = random_circuit(np.random.default_rng(seed), n, length)
    once = parse_circuit(format_circuit(insts))
    assert [(i.kind, i.targets, i.param) for i in once] == [(i.kind, i.targets, i.param) for i in insts]
    assert format_circuit(parse_circuit(format_circuit(once))) == format_circuit(once)


def test_decompose_x_error():
    reg = SymbolRegistry(8)
    out = decompose_noise(make("X_ERROR", 0, param=0.1), reg)
    assert out == [(0, "X", 1)]
    g = reg.group_of(1)
    assert (g.distribution, g.param, g.arity) == ("bernoulli", 0.1, 1)


def test_decompose_depolarize_and_y():
    reg = SymbolRegistry(16)
    out = decompose_noise(make("DEPOLARIZE1", 3, param=0.3), reg)
    assert out == [(3, "X", 1), (3, "Z", 2)]
    assert reg.group_of(2).distribution == "pauli" and reg.group_of(2).arity == 2
    out = decompose_noise(make("Y_ERROR", 1, param=0.2), reg)
    assert out == [(1, "X", 3), (1, "Z", 3)]
    out = decompose_noise(make("DEPOLARIZE2", 0, 2, param=0.1), reg)
    assert out == [(0, "X", 4), (0, "Z", 5), (2, "X", 6), (2, "Z", 7)]
    with pytest.raises(ValueError):
        decompose_noise(make("H", 0), reg)


def test_zero_probability_noise_is_inert():
    noisy = initialize(parse_circuit("H 0\nCX 0 1\nX_ERROR(0) 0 1\nDEPOLARIZE1(0) 0\nM 0 1\n"))
    clean = initialize(parse_circuit("H 0\nCX 0 1\nM 0 1\n"))
    a = sample(noisy.expressions, draw_assignments(noisy.registry, 2000, 3)).to_dense()
    assert (a[0] == a[1]).all()
    b = sample(clean.expressions, draw_assignments(clean.registry, 2000, 3)).to_dense()
    assert (b[0] == b[1]).all()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 80), st.integers(0, 2**32 - 1), st.booleans())
def test_symbol_budget_is_respected(n, length, seed, resets):
    insts = random_circuit(np.random.default_rng(seed), n, length, resets=resets)
    s = summarize(insts)
    compiled = initialize(insts)
    assert compiled.n_symbols <= s.symbol_capacity
    if not resets:
        assert compiled.n_symbols <= s.n_fault_symbols + s.n_measurements + 1
    assert compiled.n_measurements == s.n_measurements
