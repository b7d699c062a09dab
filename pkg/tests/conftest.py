"""Shared brute-force oracles for the test modules."""

import sys
from itertools import product

import pytest


def kernel_set(columns, p, n=None):
    """All a in F_p^n with sum_i a_i * columns[i] == 0, by enumeration."""
    n = len(columns) if n is None else n
    d = len(columns[0]) if columns else 0
    out = set()
    for a in product(range(p), repeat=n):
        if all(sum(a[i] * columns[i][k] for i in range(n)) % p == 0 for k in range(d)):
            out.add(a)
    return out


def span_set(basis, p, n):
    out = set()
    for coeffs in product(range(p), repeat=len(basis)):
        out.add(tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(n)))
    if not basis:
        out.add((0,) * n)
    return out


def brute_force_full_support(columns, p):
    """Relations with every coefficient nonzero."""
    n = len(columns)
    d = len(columns[0]) if columns else 0
    count = 0
    for a in product(range(1, p), repeat=n):
        if all(sum(a[i] * columns[i][k] for i in range(n)) % p == 0 for k in range(d)):
            count += 1
    return count


@pytest.fixture
def oracles():
    return {"kernel": kernel_set, "span": span_set, "full": brute_force_full_support}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda x: int(x.split()[1])):
            terminalreporter.write_line(line)
