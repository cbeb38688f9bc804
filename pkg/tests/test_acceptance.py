"""The twelve acceptance criteria, one test (and one printed line) each."""

import subprocess
import sys
import time

import pytest

from widthlab.acceptance import CRITERIA

# stated runtime budgets in seconds; criteria without one get a generous cap
BUDGET = {1: 60, 2: 30, 3: 60, 5: 120, 7: 60}


def _report(capsys, line):
    with capsys.disabled():
        print(f"\n{line}")


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    t = time.perf_counter()
    res = CRITERIA[k]()
    elapsed = time.perf_counter() - t
    budget = BUDGET.get(k, 300)
    ok = res.passed and elapsed < budget
    _report(capsys, f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {res.detail} ({elapsed:.1f}s, budget {budget}s)")
    assert res.passed, res.detail
    assert elapsed < budget


def test_criterion_12_determinism(capsys):
    cmd = [sys.executable, "-m", "widthlab", "--output", "csv", "acceptance"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    same = first == second
    rows = first.decode().splitlines()
    _report(capsys, f"criterion 12: {'PASS' if same else 'FAIL'}  two CLI runs of the table, {len(rows)} lines, byte-identical={same}")
    assert same
    assert len(rows) == 1 + len(CRITERIA)
    assert all(",PASS," in r for r in rows[1:])
