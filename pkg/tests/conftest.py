import itertools

import pytest

from dissoc.group import ElementSet


def brute_dissociated(elements: ElementSet) -> bool:
    """All 2^k subset sums distinct, by plain enumeration with tuples."""
    g = elements.group
    seen = set()
    for r in range(len(elements) + 1):
        for combo in itertools.combinations(elements.elements, r):
            total = g.identity
            for x in combo:
                total = g.add(total, x)
            if total in seen:
                return False
            seen.add(total)
    return True


def gf2_rank(rows) -> int:
    """Rank over the two-element field, pivoting on the highest set bit."""
    pivots = {}
    for row in rows:
        v = sum((int(b) % 2) << i for i, b in enumerate(row))
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    pytest_runtest_logreport.lines.append(f"{status}  {name}  ({report.duration:.1f}s)")


pytest_runtest_logreport.lines = []


def pytest_terminal_summary(terminalreporter):
    lines = pytest_runtest_logreport.lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def Z():
    from dissoc.group import free_group

    return free_group(1)
