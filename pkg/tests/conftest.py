import numpy as np
import pytest

from convprod import Grid, Tvir


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_tvir(rng, n, kappa=1.0):
    """Random TVIR with rows outside ``kappa / 2`` zeroed."""
    T = rng.standard_normal((n, n))
    T[np.abs(Grid(n).t) > kappa / 2 + 1e-12] = 0.0
    return Tvir(T, kappa)


def cconv_oracle(f, g):
    n = len(f)
    return np.array([sum(f[(a - j + n // 2) % n] * g[j] for j in range(n)) for a in range(n)])


def dense_apply_oracle(T, u):
    """Double loop over the kernel ``K(a, j) = T[(a - j + n/2) mod n, j]``."""
    V = np.asarray(T.values)
    n = V.shape[0]
    out = np.zeros(n)
    for a in range(n):
        for j in range(n):
            out[a] += V[(a - j + n // 2) % n, j] * u[j]
    return out / n


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    """Remember one acceptance outcome for the terminal summary."""
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
