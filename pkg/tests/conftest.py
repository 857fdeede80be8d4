import time

import numpy as np
import pytest

from cmc1.catalog import CATALOG

SUITE_BUDGET_S = 60.0

# criterion -> {case: (passed, detail)}
_ACCEPTANCE = {}
_TITLES = {}


def random_taus(expression, n=200, seed=0):
    """Points of the catalog annulus of ``expression`` kept away from the
    negative real axis, where principal branches jump."""
    d = CATALOG[expression]
    rng = np.random.default_rng(seed)
    r = rng.uniform(d.r_min, d.r_max, n)
    theta = rng.uniform(-np.pi + 0.05, np.pi - 0.05, n)
    return r * np.exp(1j * theta)


@pytest.fixture(params=sorted(CATALOG))
def catalog_expression(request):
    return request.param


@pytest.fixture
def acceptance():
    """``record(criterion, title, case, passed, detail)`` for the summary table."""
    def record(criterion, title, case, passed, detail):
        _TITLES[criterion] = title
        _ACCEPTANCE.setdefault(criterion, {})[case] = (bool(passed), detail)
        return bool(passed)
    return record


def pytest_sessionstart(session):
    session.config._suite_t0 = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - session.config._suite_t0
    ok = elapsed < SUITE_BUDGET_S
    _TITLES[11] = "full suite wall clock"
    _ACCEPTANCE[11] = {"suite": (ok, f"{elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")}
    if not ok and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE or len(_ACCEPTANCE) < 2:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE):
        cases = _ACCEPTANCE[criterion]
        ok = all(p for p, _ in cases.values())
        detail = "; ".join(f"{c}: {d}" + ("" if p else " [FAIL]") for c, (p, d) in cases.items())
        tr.write_line(f"criterion {criterion:>2}  {'PASS' if ok else 'FAIL'}  "
                      f"{_TITLES[criterion]} | {detail}")
