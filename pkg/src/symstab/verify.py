"""Cross-checks of the symbolic pipeline against the reference oracles.

Shared by the test suite and the ``verify`` command.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .circuit import NOISE, Instruction, make, n_qubits
from .engine import initialize
from .oracle import exact_distribution, run_concrete, run_forced
from .sampler import sample_compiled

_GATES_1Q = ("H", "S", "S_DAG", "X", "Y", "Z")
_NOISE_1Q = ("X_ERROR", "Y_ERROR", "Z_ERROR", "DEPOLARIZE1")


def random_circuit(
    rng: np.random.Generator,
    n: int,
    length: int,
    noise: bool = True,
    resets: bool = True,
    max_measurements: int | None = None,
) -> list[Instruction]:
    """Random circuit on ``n`` qubits with ``length`` instructions."""
    kinds = ["1q"] * 4 + ["cx"] * 3 + ["m"] * 2
    if noise:
        kinds += ["noise1"] * 2 + (["noise2"] if n > 1 else [])
    if resets:
        kinds.append("r")
    if n < 2:
        kinds = [k for k in kinds if k != "cx"]
    out: list[Instruction] = []
    n_m = 0
    for _ in range(length):
        k = kinds[rng.integers(len(kinds))]
        if k == "m" and max_measurements is not None and n_m >= max_measurements:
            k = "1q"
        q = int(rng.integers(n))
        if k == "1q":
            out.append(make(_GATES_1Q[rng.integers(len(_GATES_1Q))], q))
        elif k == "cx":
            a, b = rng.choice(n, 2, replace=False)
            out.append(make("CX", int(a), int(b)))
        elif k == "m":
            out.append(make("M", q))
            n_m += 1
        elif k == "r":
            out.append(make("R", q))
        elif k == "noise1":
            p = float(rng.choice([0.0, 0.05, 0.2, 0.5, 1.0]))
            out.append(make(_NOISE_1Q[rng.integers(len(_NOISE_1Q))], q, param=p))
        else:
            a, b = rng.choice(n, 2, replace=False)
            out.append(make("DEPOLARIZE2", int(a), int(b), param=float(rng.choice([0.05, 0.3]))))
    return out


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    stats: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}"


def concretization_mismatches(instructions, assignments: int, rng: np.random.Generator) -> int:
    """Number of forced assignments where expression evaluation and the concrete oracle disagree."""
    compiled = initialize(instructions)
    bad = 0
    for _ in range(assignments):
        a = rng.integers(0, 2, size=compiled.n_symbols, dtype=np.uint8)
        a[0] = 1
        symbolic = [e.evaluate(a) for e in compiled.expressions]
        if symbolic != run_forced(instructions, a):
            bad += 1
    return bad


def empirical_distribution(rows: np.ndarray) -> dict[str, float]:
    counts = Counter("".join(map(str, r)) for r in rows.tolist())
    total = max(len(rows), 1)
    return {k: v / total for k, v in counts.items()}


def total_variation(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def distribution_check(instructions, shots: int, seed: int):
    """(tvd, deterministic_ok) of the symbolic sampler against the exact distribution."""
    exact = exact_distribution(instructions)
    compiled = initialize(instructions)
    rows = sample_compiled(compiled, shots, seed).shots_major()
    tvd = total_variation(empirical_distribution(rows), exact)
    n_m = compiled.n_measurements
    det_ok = True
    for k in range(n_m):
        p1 = sum(pr for rec, pr in exact.items() if rec[k] == "1")
        if p1 < 1e-9 and rows[:, k].any():
            det_ok = False
        if p1 > 1 - 1e-9 and not rows[:, k].all():
            det_ok = False
    return tvd, det_ok


def marginal_z_scores(instructions, shots: int, seed: int) -> np.ndarray:
    """Two-sample z scores between symbolic and concrete per-measurement marginals."""
    compiled = initialize(instructions)
    a = sample_compiled(compiled, shots, seed).shots_major().mean(axis=0)
    b = run_concrete(instructions, seed + 1, shots).mean(axis=0)
    pooled = (a + b) / 2
    se = np.sqrt(np.maximum(pooled * (1 - pooled), 0) * 2 / shots)
    diff = np.abs(a - b)
    return np.where(se > 0, diff / np.where(se > 0, se, 1), np.where(diff > 0, np.inf, 0.0))


def run_battery(
    seed: int = 0, circuits: int = 20, assignments: int = 20, shots: int = 2000, dist_shots: int = 20000, given=None
):
    """Run the verification battery; ``given`` replaces the random circuits when supplied."""
    rng = np.random.default_rng(seed)
    if given is not None:
        pool = [list(given)]
    else:
        pool = [random_circuit(rng, int(rng.integers(1, 7)), int(rng.integers(5, 40))) for _ in range(circuits)]
    results = []

    bad = [concretization_mismatches(c, assignments, rng) for c in pool]
    results.append(
        CheckResult(
            "concretization",
            sum(bad) == 0,
            f"{sum(bad)} mismatches over {len(pool)} circuits x {assignments} assignments",
            {"mismatches": sum(bad)},
        )
    )

    worst = 0.0
    for c in pool:
        z = marginal_z_scores(c, shots, int(rng.integers(2**31)))
        worst = max(worst, float(z.max(initial=0.0)))
    results.append(CheckResult("marginals", worst <= 4.0, f"max |z| = {worst:.2f} at {shots} shots", {"max_z": worst}))

    noiseless = [c for c in pool if not any(i.kind in NOISE for i in c)]
    if given is None:
        noiseless = [
            random_circuit(rng, int(rng.integers(1, 7)), 25, noise=False, max_measurements=6) for _ in range(circuits)
        ]
    worst_tvd, det_ok = 0.0, True
    for c in noiseless:
        if n_qubits(c) > 12:
            continue
        tvd, ok = distribution_check(c, dist_shots, int(rng.integers(2**31)))
        worst_tvd = max(worst_tvd, tvd)
        det_ok &= ok
    results.append(
        CheckResult(
            "distribution",
            det_ok and worst_tvd < 0.05,
            f"max TVD {worst_tvd:.4f} over {len(noiseless)} noiseless circuits at {dist_shots} shots; deterministic outcomes "
            + ("exact" if det_ok else "WRONG"),
            {"max_tvd": worst_tvd},
        )
    )
    return results
