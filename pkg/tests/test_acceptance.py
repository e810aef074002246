"""The twelve acceptance criteria at their stated tolerances, one summary line each."""
import os
import subprocess
import sys
import time

import pytest

from scv import suite

from conftest import ACCEPTANCE_LINES

SEED = 0


def _record(number, name, passed, measured, tolerance, detail):
    line = (f"criterion {number:02d} {name}: {'PASS' if passed else 'FAIL'} "
            f"measured={measured:.3e} tol={tolerance:.3e} ({detail})")
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number):
    res = suite.CRITERIA[number - 1](SEED)
    assert res.number == number
    _record(res.number, res.name, res.passed, res.measured, res.tolerance, res.detail)
    assert res.passed, res.detail


def _suite_run(workers):
    env = dict(os.environ, SCV_WORKERS=str(workers))
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "scv.cli", "suite", "--seed", "7"], capture_output=True, env=env)
    return proc, time.perf_counter() - t0


@pytest.mark.slow
def test_criterion_12_determinism():
    (a, ta), (b, tb) = _suite_run(1), _suite_run(3)
    identical = a.stdout == b.stdout and len(a.stdout) > 0
    in_budget = max(ta, tb) < suite.SUITE_BUDGET_S
    passed = identical and in_budget and a.returncode == b.returncode == 0
    _record(12, "determinism", passed, max(ta, tb), suite.SUITE_BUDGET_S,
            f"byte-identical suite output for SCV_WORKERS=1 and 3: {identical}; exit codes {a.returncode}, {b.returncode}")
    assert identical, "suite output differs between worker counts"
    assert in_budget
    assert a.returncode == b.returncode == 0, a.stderr.decode() + b.stderr.decode()
