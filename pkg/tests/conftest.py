import random
import re

import pytest

from digifix.core import DigitalImage


def square(lo, hi):
    return [(x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1)]


def random_connected(rng: random.Random, size: int, window: int | None = None):
    """Grow a c_1-connected planar point set by random accretion."""
    pts = {(0, 0)}
    while len(pts) < size:
        x, y = rng.choice(sorted(pts))
        dx, dy = rng.choice([(1, 0), (-1, 0), (0, 1), (0, -1)])
        q = (x + dx, y + dy)
        if window is not None and not (0 <= q[0] < window and 0 <= q[1] < window):
            continue
        pts.add(q)
    return sorted(pts)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def sq3():
    return DigitalImage(square(0, 2), 1)


_CRITERIA: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "acceptance: acceptance suite")


def pytest_runtest_logreport(report):
    if report.when != "call" and report.outcome == "passed":
        return
    m = re.search(r"test_criterion_(\d+)_", report.nodeid)
    if m:
        _CRITERIA.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok = all(o == "passed" for o in _CRITERIA[n])
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}")
