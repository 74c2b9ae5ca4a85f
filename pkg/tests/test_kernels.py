import os
import subprocess
import sys

import numpy as np
import pytest

from symstab import kernels
from symstab.bitmatrix import COLUMN, TiledBitMatrix


def _active_in_subprocess(flag):
    env = dict(os.environ)
    env.pop("SYMSTAB_DISABLE_NUMBA", None)
    if flag is not None:
        env["SYMSTAB_DISABLE_NUMBA"] = flag
    cmd = [sys.executable, "-c", "from symstab import kernels; print(kernels.active())"]
    return subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout.strip()


def test_env_flag_selects_numpy():
    assert _active_in_subprocess("1") == "numpy"
    expected = "numba" if "numba" in kernels.BACKENDS else "numpy"
    assert _active_in_subprocess(None) == expected
    assert _active_in_subprocess("0") == expected


def test_use_switches_and_rejects_unknown():
    before = kernels.active()
    prev = kernels.use("numpy")
    assert prev == before and kernels.active() == "numpy"
    kernels.use(before)
    with pytest.raises(ValueError):
        kernels.use("fortran")


@pytest.mark.skipif("numba" not in kernels.BACKENDS, reason="numba not installed")
def test_gate_kernels_agree_across_backends():
    rng = np.random.default_rng(0)
    d = rng.integers(0, 2, size=(700, 1600), dtype=np.uint8)
    results = []
    for name in ("numba", "numpy"):
        prev = kernels.use(name)
        try:
            m = TiledBitMatrix.from_dense(d, COLUMN)
            b = kernels.backend
            b.gate_h(m.data, 3, 515, 1024)
            b.gate_s(m.data, 4, 600, 1030)
            b.gate_s_dag(m.data, 5, 700, 1031)
            b.gate_cx(m.data, 6, 518, 9, 521, 1024)
            b.pauli_phase(m.data, 1100, 7, 519, False)
            results.append(m.to_dense())
        finally:
            kernels.use(prev)
    np.testing.assert_array_equal(results[0], results[1])
    assert not np.array_equal(results[0], d)
