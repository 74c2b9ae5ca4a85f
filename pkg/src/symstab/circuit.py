"""Line-oriented circuit text format.

One instruction per line: ``NAME[(p)] t0 t1 ...``.  ``#`` starts a comment,
names are case-insensitive, ``CNOT`` and ``MZ`` are aliases of ``CX`` and
``M``.  Two-qubit instructions take their targets pairwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import CircuitError

GATES_1Q = frozenset({"H", "S", "S_DAG", "X", "Y", "Z"})
GATES_2Q = frozenset({"CX"})
NOISE_1Q = frozenset({"X_ERROR", "Y_ERROR", "Z_ERROR", "DEPOLARIZE1"})
NOISE_2Q = frozenset({"DEPOLARIZE2"})
NOISE = NOISE_1Q | NOISE_2Q
KINDS = GATES_1Q | GATES_2Q | NOISE | {"M", "R", "TICK"}
ALIASES = {"CNOT": "CX", "MZ": "M"}
PAIRED = GATES_2Q | NOISE_2Q
NOISE_ARITY = {"X_ERROR": 1, "Y_ERROR": 1, "Z_ERROR": 1, "DEPOLARIZE1": 2, "DEPOLARIZE2": 4}

_UNSUPPORTED = {"REPEAT", "DETECTOR", "OBSERVABLE_INCLUDE", "QUBIT_COORDS", "SHIFT_COORDS"}
_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(\s*([^)]*?)\s*\))?\s*(.*)$")


@dataclass(frozen=True)
class Instruction:
    kind: str
    targets: tuple[int, ...] = ()
    param: float | None = None
    line: int = 0

    def pairs(self):
        return list(zip(self.targets[::2], self.targets[1::2]))

    def __str__(self) -> str:
        head = self.kind if self.param is None else f"{self.kind}({self.param!r})"
        return " ".join([head, *map(str, self.targets)])


@dataclass(frozen=True)
class GroupSpec:
    group_id: int
    arity: int
    kind: str
    param: float
    instruction_index: int
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class CircuitSummary:
    n_qubits: int
    n_measurements: int
    n_fault_symbols: int
    n_resets: int = 0
    symbol_groups: tuple[GroupSpec, ...] = field(default=())

    @property
    def symbol_capacity(self) -> int:
        """Upper bound on symbols initialization can allocate, constant included."""
        return 1 + self.n_fault_symbols + self.n_measurements + self.n_resets


def _validate(kind, targets, param, line):
    if kind not in KINDS:
        raise CircuitError(f"unknown instruction {kind!r}", line)
    if kind in NOISE:
        if param is None:
            raise CircuitError(f"{kind} needs a probability argument", line)
        if not 0.0 <= param <= 1.0:
            raise CircuitError(f"{kind} probability {param} outside [0, 1]", line)
    elif param is not None:
        raise CircuitError(f"{kind} takes no argument", line)
    if kind == "TICK":
        if targets:
            raise CircuitError("TICK takes no targets", line)
        return
    if not targets:
        raise CircuitError(f"{kind} needs at least one target", line)
    if kind in PAIRED:
        if len(targets) % 2:
            raise CircuitError(f"{kind} needs an even number of targets", line)
        for a, b in zip(targets[::2], targets[1::2]):
            if a == b:
                raise CircuitError(f"{kind} pair ({a}, {b}) repeats a qubit", line)


def make(kind: str, *targets: int, param: float | None = None, line: int = 0) -> Instruction:
    kind = ALIASES.get(kind.upper(), kind.upper())
    targets = tuple(int(t) for t in targets)
    if any(t < 0 for t in targets):
        raise CircuitError("qubit targets must be non-negative", line)
    _validate(kind, targets, param, line)
    return Instruction(kind, targets, None if param is None else float(param), line)


def parse_circuit(text: str) -> list[Instruction]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "{" in body or "}" in body:
            raise CircuitError("blocks ('{', '}') are not supported by this format", lineno)
        m = _LINE.match(body)
        if not m:
            raise CircuitError(f"cannot parse {body!r}", lineno)
        name, arg, rest = m.groups()
        upper = name.upper()
        if upper in _UNSUPPORTED:
            raise CircuitError(f"{upper} is not supported by this format", lineno)
        param = None
        if arg is not None:
            try:
                param = float(arg)
            except ValueError:
                raise CircuitError(f"bad argument {arg!r}", lineno) from None
        targets = []
        for tok in rest.split():
            if not tok.isdigit():
                raise CircuitError(f"bad target {tok!r}; expected a non-negative integer", lineno)
            targets.append(int(tok))
        out.append(make(upper, *targets, param=param, line=lineno))
    return out


def format_circuit(instructions) -> str:
    return "".join(f"{inst}\n" for inst in instructions)


def n_qubits(instructions) -> int:
    return 1 + max((t for inst in instructions for t in inst.targets), default=-1)


def noise_groups(inst: Instruction):
    """Per-group qubit tuples for a noise instruction (one target, or one pair)."""
    if inst.kind in NOISE_2Q:
        return inst.pairs()
    return [(t,) for t in inst.targets]


def summarize(instructions) -> CircuitSummary:
    n_m = n_r = n_f = 0
    groups = []
    for idx, inst in enumerate(instructions):
        if inst.kind == "M":
            n_m += len(inst.targets)
        elif inst.kind == "R":
            n_r += len(inst.targets)
        elif inst.kind in NOISE:
            arity = NOISE_ARITY[inst.kind]
            for qs in noise_groups(inst):
                groups.append(GroupSpec(len(groups), arity, inst.kind, inst.param, idx, qs))
                n_f += arity
    return CircuitSummary(n_qubits(instructions), n_m, n_f, n_r, tuple(groups))


def decompose_noise(inst: Instruction, registry, instruction_index: int = -1):
    """Allocate fault symbols for ``inst`` and return ``[(qubit, axis, symbol), ...]``.

    DEPOLARIZE1 becomes X**s1 Z**s2; DEPOLARIZE2 becomes X/Z pairs on both
    qubits; Y_ERROR applies X**s and Z**s with one shared symbol.
    """
    if inst.kind not in NOISE:
        raise ValueError(f"{inst.kind} is not a noise instruction")
    out = []
    label = f"{inst.kind}({inst.param!r})"
    for qs in noise_groups(inst):
        if inst.kind in ("X_ERROR", "Z_ERROR", "Y_ERROR"):
            (s,) = registry.allocate("fault", "bernoulli", inst.param, 1, instruction_index, qs, label)
            q = qs[0]
            if inst.kind == "X_ERROR":
                out.append((q, "X", s))
            elif inst.kind == "Z_ERROR":
                out.append((q, "Z", s))
            else:
                out += [(q, "X", s), (q, "Z", s)]
        else:
            ids = registry.allocate("fault", "pauli", inst.param, 2 * len(qs), instruction_index, qs, label)
            for k, q in enumerate(qs):
                out += [(q, "X", ids[2 * k]), (q, "Z", ids[2 * k + 1])]
    return out
