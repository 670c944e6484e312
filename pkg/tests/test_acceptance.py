"""Acceptance criteria 1-9 at full size.

Each test runs one verification suite, prints a ``PASS``/``FAIL`` line with the
wall-clock time, and asserts both the outcome and the runtime budget. The
lines are collected into the pytest terminal summary; running this file as a
script prints them directly.
"""

import sys
import time

import pytest

from liequot.verification import SUITES

# (number, suite, kwargs, budget in seconds)
CRITERIA = [
    (1, "orbit-metric", dict(ranks=(1, 2, 3), per_face=25), 30),
    (2, "moment-recovery", dict(samples=100, tolerance=1e-9), 10),
    (3, "m-oracle", dict(levels=50, max_weights=8, max_rank=3), 60),
    (4, "convexity", dict(pairs=1000, tolerance=1e-9), 10),
    (5, "chambers", dict(n_configs=50, samples=20, max_rank=2), 60),
    (6, "finiteness", dict(n_configs=50, grid_size=10_000), 60),
    (7, "rescale-identity", dict(max_den=16, max_rank=3, samples=1000), 5),
    (8, "projection-lemma", dict(float_instances=1000, exact_instances=100, max_dim=10,
                                 tolerance=1e-10, swap_tolerance=1e-9), 10),
    (9, "local-invariance", dict(), 30),
]

REPORT: list[str] = []


def run_criterion(number, name, kwargs, budget, seed=0):
    start = time.perf_counter()
    res = SUITES[name](seed, **kwargs)
    elapsed = time.perf_counter() - start
    ok = res.passed and elapsed < budget
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number} {name:<17} "
            f"checked={res.checked} failures={res.failures} ({elapsed:.1f}s, budget {budget}s)")
    return res, elapsed, line


@pytest.mark.acceptance
@pytest.mark.parametrize("number,name,kwargs,budget", CRITERIA, ids=[f"c{c[0]}-{c[1]}" for c in CRITERIA])
def test_criterion(number, name, kwargs, budget):
    res, elapsed, line = run_criterion(number, name, kwargs, budget)
    REPORT.append(line)
    print(line)
    assert res.passed, f"{name}: {res.failures} failures, first witnesses {res.witnesses[:3]}"
    assert elapsed < budget, f"{name} took {elapsed:.1f}s, budget {budget}s"


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        _, _, line = run_criterion(*crit)
        print(line, flush=True)
        failed += line.startswith("FAIL")
    sys.exit(1 if failed else 0)
