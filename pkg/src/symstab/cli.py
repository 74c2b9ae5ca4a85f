"""Command line: ``symstab {sample,analyze,verify,bench}``.

Exit status is 0 on success, 1 on usage or parse errors and 2 when an
internal invariant fails (including a failed ``verify``).
"""

from __future__ import annotations

import argparse
import contextlib
import sys
import time

from . import kernels
from .bench import FAMILIES, run_bench
from .circuit import parse_circuit
from .engine import initialize
from .errors import CircuitError, TableauInvariantError
from .sampler import draw_assignments, encode_shots, sample
from .verify import run_battery

EXIT_OK, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symstab", description="Stabilizer sampling with symbolic phases.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_io(p, out=True):
        p.add_argument("--in", dest="input", default="-", help="circuit file ('-' for stdin, the default)")
        if out:
            p.add_argument("--out", default="-", help="output file ('-' for stdout, the default)")

    p = sub.add_parser("sample", help="sample measurement outcomes")
    add_io(p)
    p.add_argument("--shots", type=_positive, default=1)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--format", choices=("01", "b8"), default="01")
    p.add_argument("--workers", type=_positive, default=1, help="threads for drawing assignments")
    p.add_argument(
        "--dump-assignments",
        metavar="PATH",
        help="debug: write the symbol assignments (one '0'/'1' line per symbol, one column per shot); unstable",
    )

    p = sub.add_parser("analyze", help="print each measurement as an XOR of symbols")
    add_io(p)

    p = sub.add_parser("verify", help="check the sampler against the reference oracles")
    p.add_argument("--in", dest="input", default=None, help="check this circuit instead of random ones ('-' for stdin)")
    p.add_argument("--out", default="-")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--circuits", type=_positive, default=20)
    p.add_argument("--assignments", type=_positive, default=20)
    p.add_argument("--shots", type=_positive, default=2000)

    p = sub.add_parser("bench", help="time initialization and sampling on layered random circuits")
    p.add_argument("--out", default="-")
    p.add_argument("--family", nargs="+", choices=FAMILIES, default=list(FAMILIES))
    p.add_argument("--n", nargs="+", type=_positive, default=[50, 100])
    p.add_argument("--shots", type=_positive, default=10_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--backend", choices=sorted(kernels.BACKENDS), default=None)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


@contextlib.contextmanager
def _open_out(path: str, binary: bool = False):
    if path == "-":
        yield sys.stdout.buffer if binary else sys.stdout
    else:
        with open(path, "wb" if binary else "w") as fh:
            yield fh


def cmd_sample(args) -> int:
    instructions = parse_circuit(_read(args.input))
    t0 = time.perf_counter()
    compiled = initialize(instructions)
    t1 = time.perf_counter()
    batch = draw_assignments(compiled.registry, args.shots, args.seed, args.workers)
    result = sample(compiled.expressions, batch)
    t2 = time.perf_counter()
    with _open_out(args.out, binary=True) as fh:
        fh.write(encode_shots(result, args.format))
        fh.flush()
    if args.dump_assignments:
        with open(args.dump_assignments, "w") as fh:
            fh.write(batch.data.dump_text())
    print(f"init_seconds={t1 - t0:.6f} sampling_seconds={t2 - t1:.6f} shots={args.shots}", file=sys.stderr)
    return EXIT_OK


def describe_symbols(compiled) -> list[str]:
    """Legend lines: origin, instruction, targets and distribution of each symbol."""
    lines = []
    by_index = compiled.instructions
    for group in compiled.registry.groups[1:]:
        inst = by_index[group.instruction_index]
        where = f"line {inst.line}" if inst.line else f"instruction {group.instruction_index}"
        targets = " ".join(map(str, group.qubits))
        if group.origin == "measurement":
            (s,) = group.symbols
            lines.append(f"# s{s}: measurement randomness, {inst.kind} {where} target {targets}, fair coin")
            continue
        names = ",".join(f"s{s}" for s in group.symbols)
        if group.distribution == "bernoulli":
            dist = f"bernoulli p={group.param!r}"
        else:
            dist = f"joint pauli pattern p={group.param!r} ({group.arity} bits: X,Z per target)"
        for s in group.symbols:
            lines.append(f"# s{s}: fault {group.label} {where} targets {targets}, group {{{names}}} {dist}")
    return lines


def cmd_analyze(args) -> int:
    compiled = initialize(parse_circuit(_read(args.input)))
    lines = [f"m{k} = {e.render()}" for k, e in enumerate(compiled.expressions, start=1)]
    legend = describe_symbols(compiled)
    if legend:
        lines += ["# s0 is the constant 1"] if any(0 in e.symbols for e in compiled.expressions) else []
        lines += legend
    with _open_out(args.out) as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    given = None if args.input is None else parse_circuit(_read(args.input))
    results = run_battery(args.seed, args.circuits, args.assignments, args.shots, given=given)
    with _open_out(args.out) as fh:
        for r in results:
            fh.write(r.line() + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


def cmd_bench(args) -> int:
    previous = kernels.use(args.backend) if args.backend else None
    try:
        with _open_out(args.out) as fh:
            fh.write("family,n,init_seconds,sampling_seconds,shots\n")
            for fam, n, t in run_bench(args.family, args.n, args.shots, args.seed, args.workers):
                fh.write(f"{fam},{n},{t.init_seconds:.6f},{t.sampling_seconds:.6f},{t.shots}\n")
                fh.flush()
    finally:
        if previous is not None:
            kernels.use(previous)
    return EXIT_OK


COMMANDS = {"sample": cmd_sample, "analyze": cmd_analyze, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CircuitError as exc:
        print(f"symstab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"symstab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TableauInvariantError as exc:
        print(f"symstab: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
