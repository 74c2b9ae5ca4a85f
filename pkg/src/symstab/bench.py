"""Layered random-circuit benchmarks with separate initialization and sampling timings.

Circuit construction (seeded with ``numpy.random.default_rng(seed)``): ``n``
qubits, ``n`` layers.  Each layer applies H, S or nothing to every qubit
(uniformly), then CX on disjoint random pairs (5 pairs for family ``a``,
``n // 2`` for ``b`` and ``c``), then, for family ``c`` only,
``DEPOLARIZE1(p)`` on every qubit, then measures ``ceil(0.05 n)`` distinct
random qubits.  Every qubit is measured at the end.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .circuit import Instruction, make
from .engine import initialize
from .sampler import draw_assignments, sample

FAMILIES = ("a", "b", "c")
DEFAULT_NOISE = 0.001


def layered_circuit(family: str, n: int, seed: int = 0, p: float = DEFAULT_NOISE) -> list[Instruction]:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if n < 2:
        raise ValueError("benchmark circuits need at least two qubits")
    rng = np.random.default_rng(seed)
    n_pairs = min(5, n // 2) if family == "a" else n // 2
    n_meas = max(1, math.ceil(0.05 * n))
    out: list[Instruction] = []
    for _ in range(n):
        choice = rng.integers(3, size=n)
        for kind, code in (("H", 0), ("S", 1)):
            qs = np.flatnonzero(choice == code)
            if qs.size:
                out.append(make(kind, *qs.tolist()))
        perm = rng.permutation(n)[: 2 * n_pairs]
        out.append(make("CX", *perm.tolist()))
        if family == "c":
            out.append(make("DEPOLARIZE1", *range(n), param=p))
        out.append(make("M", *rng.choice(n, n_meas, replace=False).tolist()))
    out.append(make("M", *range(n)))
    return out


def identity_padding(n: int, n_gates: int, seed: int = 0) -> list[Instruction]:
    """``n_gates`` Clifford gates whose product is the identity (H H, S S_DAG, CX CX blocks)."""
    rng = np.random.default_rng(seed)
    out: list[Instruction] = []
    while len(out) < n_gates:
        kind = int(rng.integers(3)) if n > 1 else int(rng.integers(2))
        if kind == 0:
            q = int(rng.integers(n))
            out += [make("H", q), make("H", q)]
        elif kind == 1:
            q = int(rng.integers(n))
            out += [make("S", q), make("S_DAG", q)]
        else:
            a, b = rng.choice(n, 2, replace=False).tolist()
            out += [make("CX", a, b), make("CX", a, b)]
    return out[: n_gates - n_gates % 2]


@dataclass
class Timing:
    init_seconds: float
    sampling_seconds: float
    shots: int
    n_measurements: int
    n_symbols: int


def time_pipeline(instructions, shots: int, seed: int = 0, workers: int = 1, repeats: int = 1) -> Timing:
    """Wall-clock of initialization and of sampling (assignment draw plus multiply).

    With ``repeats > 1`` the sampling phase is rerun and the fastest run kept.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    t0 = time.perf_counter()
    compiled = initialize(instructions)
    t1 = time.perf_counter()
    best = math.inf
    for _ in range(max(1, repeats)):
        s0 = time.perf_counter()
        sample(compiled.expressions, draw_assignments(compiled.registry, shots, seed, workers))
        best = min(best, time.perf_counter() - s0)
    return Timing(t1 - t0, best, shots, compiled.n_measurements, compiled.n_symbols)


def run_bench(families=FAMILIES, sizes=(50, 100), shots: int = 10_000, seed: int = 0, workers: int = 1):
    """Yield ``(family, n, Timing)`` for each combination."""
    for fam in families:
        for n in sizes:
            yield fam, n, time_pipeline(layered_circuit(fam, n, seed), shots, seed, workers)
