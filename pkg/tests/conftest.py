import numpy as np
import pytest
from scipy.stats import special_ortho_group


def random_rotation(q, seed):
    return special_ortho_group.rvs(q, random_state=np.random.default_rng(seed))


def random_unit_rows(rng, n, q):
    X = rng.standard_normal((n, q))
    return X / np.linalg.norm(X, axis=1)[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


ACCEPTANCE = []


def report(criterion, name, ok, detail):
    """Record one acceptance verdict; printed in the terminal summary."""
    line = f"criterion {criterion} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
