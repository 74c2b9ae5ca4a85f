"""Slow reference simulators used to check the symbolic pipeline.

Nothing here touches the tiled storage or the kernels.  The row-product
phase table is derived from explicit 2x2 matrix products at import time.
"""

from __future__ import annotations

import itertools

import numpy as np

from .circuit import NOISE, Instruction, n_qubits

_MATS = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
}


def _phase_table():
    table = {}
    for a, b in itertools.product(_MATS, repeat=2):
        prod = _MATS[a] @ _MATS[b]
        target = _MATS[(a[0] ^ b[0], a[1] ^ b[1])]
        for g in range(4):
            if np.allclose(prod, (1j**g) * target):
                table[a, b] = g
                break
    return table


PHASE_TABLE = _phase_table()  # (pauli_a, pauli_b) -> g in 0..3 with a@b == i**g * (a xor b)
# same table indexed by 2*x + z of each factor
_G = np.zeros((4, 4), dtype=np.int64)
for (_a, _b), _g in PHASE_TABLE.items():
    _G[2 * _a[0] + _a[1], 2 * _b[0] + _b[1]] = _g


class ConcreteTableau:
    """Destabilizer/stabilizer tableau with one sign bit per row."""

    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.x[np.arange(n), np.arange(n)] = 1
        self.z[n + np.arange(n), np.arange(n)] = 1

    def h(self, a):
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def s(self, a):
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def s_dag(self, a):
        for _ in range(3):
            self.s(a)

    def cx(self, a, b):
        self.r ^= self.x[:, a] & self.z[:, b] & (self.x[:, b] ^ self.z[:, a] ^ 1)
        self.x[:, b] ^= self.x[:, a]
        self.z[:, a] ^= self.z[:, b]

    def pauli(self, a, axis):
        if axis in ("X", "Y"):
            self.r ^= self.z[:, a]
        if axis in ("Z", "Y"):
            self.r ^= self.x[:, a]

    def _rowsum(self, h, i):
        """Row h := row i * row h (sign from the 2x2 product table)."""
        x, z, r = self.x, self.z, self.r
        total = 2 * int(r[h]) + 2 * int(r[i]) + int(_G[2 * x[i] + z[i], 2 * x[h] + z[h]].sum())
        assert total % 2 == 0, "rowsum of anticommuting rows"
        r[h] = (total % 4) // 2
        x[h] ^= x[i]
        z[h] ^= z[i]

    def measure(self, a, random_bit):
        """Return (outcome, was_random); ``random_bit()`` supplies random outcomes."""
        n = self.n
        ps = [p for p in range(n, 2 * n) if self.x[p, a]]
        if ps:
            p = ps[0]
            for i in range(2 * n):
                if i != p and i != p - n and self.x[i, a]:
                    self._rowsum(i, p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            self.r[p] = random_bit()
            return int(self.r[p]), True
        sx = np.zeros(n, dtype=np.uint8)
        sz = np.zeros(n, dtype=np.uint8)
        total = 0
        for i in range(n):
            if self.x[i, a]:
                row = n + i
                total += 2 * int(self.r[row]) + int(_G[2 * self.x[row] + self.z[row], 2 * sx + sz].sum())
                sx ^= self.x[row]
                sz ^= self.z[row]
        assert total % 2 == 0
        return (total % 4) // 2, False


def _fault_patterns(inst: Instruction):
    """(pattern pmf, symbol count) for one noise group; bit j of a pattern is symbol j."""
    p = inst.param
    if inst.kind in ("X_ERROR", "Y_ERROR", "Z_ERROR"):
        return [1 - p, p], 1
    if inst.kind == "DEPOLARIZE1":
        return [1 - p] + [p / 3] * 3, 2
    return [1 - p] + [p / 15] * 15, 4


def _apply_fault(t: ConcreteTableau, inst: Instruction, qs, bits):
    if inst.kind == "X_ERROR":
        if bits[0]:
            t.pauli(qs[0], "X")
    elif inst.kind == "Z_ERROR":
        if bits[0]:
            t.pauli(qs[0], "Z")
    elif inst.kind == "Y_ERROR":
        if bits[0]:
            t.pauli(qs[0], "Y")
    else:
        for k, q in enumerate(qs):
            if bits[2 * k]:
                t.pauli(q, "X")
            if bits[2 * k + 1]:
                t.pauli(q, "Z")


def _groups(inst):
    if inst.kind == "DEPOLARIZE2":
        return list(zip(inst.targets[::2], inst.targets[1::2]))
    return [(q,) for q in inst.targets]


def run_concrete_shot(instructions, fault_bits, random_bit, n=None):
    """One shot.  ``fault_bits(inst, arity)`` and ``random_bit()`` supply randomness."""
    instructions = list(instructions)
    n = max(n or 0, n_qubits(instructions), 1)
    t = ConcreteTableau(n)
    out = []
    for inst in instructions:
        k = inst.kind
        if k == "H":
            for q in inst.targets:
                t.h(q)
        elif k == "S":
            for q in inst.targets:
                t.s(q)
        elif k == "S_DAG":
            for q in inst.targets:
                t.s_dag(q)
        elif k in ("X", "Y", "Z"):
            for q in inst.targets:
                t.pauli(q, k)
        elif k == "CX":
            for a, b in zip(inst.targets[::2], inst.targets[1::2]):
                t.cx(a, b)
        elif k in NOISE:
            for qs in _groups(inst):
                _, arity = _fault_patterns(inst)
                _apply_fault(t, inst, qs, fault_bits(inst, arity))
        elif k == "M":
            for q in inst.targets:
                out.append(t.measure(q, random_bit)[0])
        elif k == "R":
            for q in inst.targets:
                if t.measure(q, random_bit)[0]:
                    t.pauli(q, "X")
    return out


def run_forced(instructions, assignment, n=None):
    """Single shot with symbol values taken from ``assignment`` (indexed by symbol id).

    Ids are handed out in traversal order exactly as the symbolic pass does:
    each noise group takes its arity, each random measurement or reset takes one.
    """
    next_id = [1]

    def take(k):
        ids = range(next_id[0], next_id[0] + k)
        next_id[0] += k
        return [int(assignment[i]) for i in ids]

    return run_concrete_shot(instructions, lambda inst, arity: take(arity), lambda: take(1)[0], n)


def run_concrete(instructions, seed=None, shots=1, assignment=None):
    """Outcomes as a (shots, n_measurements) uint8 array.

    With ``assignment`` a single forced shot is returned; otherwise faults and
    random outcomes are drawn from ``numpy.random.default_rng(seed)``.
    """
    instructions = list(instructions)
    if assignment is not None:
        return np.array([run_forced(instructions, assignment)], dtype=np.uint8)
    rng = np.random.default_rng(seed)

    def fault_bits(inst, arity):
        pmf, _ = _fault_patterns(inst)
        k = rng.choice(len(pmf), p=pmf)
        return [(k >> j) & 1 for j in range(arity)]

    rows = [run_concrete_shot(instructions, fault_bits, lambda: int(rng.integers(2))) for _ in range(shots)]
    return np.array(rows, dtype=np.uint8).reshape(shots, -1)


# -- state vector ------------------------------------------------------------

MAX_STATEVECTOR_QUBITS = 12
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_GATES = {"H": _H, "S": _S, "S_DAG": _S.conj(), "X": _MATS[(1, 0)], "Y": _MATS[(1, 1)], "Z": _MATS[(0, 1)]}


class StateVector:
    def __init__(self, n: int):
        if n > MAX_STATEVECTOR_QUBITS:
            raise ValueError(f"state vector oracle supports at most {MAX_STATEVECTOR_QUBITS} qubits")
        self.n = n
        self.amps = np.zeros((2,) * n, dtype=complex)
        self.amps[(0,) * n] = 1

    def copy(self):
        c = StateVector.__new__(StateVector)
        c.n, c.amps = self.n, self.amps.copy()
        return c

    def apply1(self, u, q):
        self.amps = np.moveaxis(np.tensordot(u, self.amps, axes=([1], [q])), 0, q)

    def cx(self, a, b):
        idx = [slice(None)] * self.n
        idx[a] = 1
        sub = self.amps[tuple(idx)]
        axis_b = b if b < a else b - 1
        self.amps[tuple(idx)] = np.flip(sub, axis=axis_b).copy()

    def prob_one(self, q):
        idx = [slice(None)] * self.n
        idx[q] = 1
        return float(np.sum(np.abs(self.amps[tuple(idx)]) ** 2))

    def project(self, q, bit):
        idx = [slice(None)] * self.n
        idx[q] = 1 - bit
        self.amps[tuple(idx)] = 0
        norm = np.sqrt(np.sum(np.abs(self.amps) ** 2))
        self.amps /= norm

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))


def exact_distribution(instructions, qubits=None, n=None, cutoff=1e-12):
    """Exact distribution of the measurement record as {'0110': prob, ...}.

    ``qubits`` optionally appends terminal measurements of those qubits.
    Noise instructions are rejected.
    """
    instructions = list(instructions)
    if any(inst.kind in NOISE for inst in instructions):
        raise ValueError("exact_distribution takes noiseless circuits")
    n = max(n or 0, n_qubits(instructions), 1 + max(qubits or [-1]), 1)
    steps = []
    for inst in instructions:
        if inst.kind == "CX":
            steps += [("CX", a, b) for a, b in zip(inst.targets[::2], inst.targets[1::2])]
        elif inst.kind != "TICK":
            steps += [(inst.kind, q) for q in inst.targets]
    steps += [("M", q) for q in qubits or []]
    branches = [(1.0, StateVector(n), "")]
    for step in steps:
        kind = step[0]
        nxt = []
        for prob, sv, rec in branches:
            if kind == "CX":
                sv.cx(step[1], step[2])
                nxt.append((prob, sv, rec))
            elif kind in _GATES:
                sv.apply1(_GATES[kind], step[1])
                nxt.append((prob, sv, rec))
            else:
                q = step[1]
                p1 = sv.prob_one(q)
                for bit, pb in ((0, 1 - p1), (1, p1)):
                    if pb * prob <= cutoff:
                        continue
                    child = sv.copy()
                    child.project(q, bit)
                    if kind == "R" and bit:
                        child.apply1(_GATES["X"], q)
                    nxt.append((prob * pb, child, rec + (str(bit) if kind == "M" else "")))
        branches = nxt
    dist: dict[str, float] = {}
    for prob, _, rec in branches:
        dist[rec] = dist.get(rec, 0.0) + prob
    return dist
