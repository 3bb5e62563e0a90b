import numpy as np
import pytest

from nonunitary_lab import ChainSpec, ImpuritySpec

_REPORT: list[str] = []


@pytest.fixture(scope="session")
def report():
    """Collect one verdict line per acceptance criterion."""
    def add(criterion, ok, detail):
        line = f"[criterion {criterion:>2}] {'PASS' if ok else 'FAIL'}: {detail}"
        print(line)
        _REPORT.append(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


def random_pt_spec(rng: np.random.Generator, hermitian: bool = False,
                   max_cells: int = 11) -> ChainSpec:
    """Random chain whose impurity sits on an inversion centre.

    Rings accept any impurity cell; open chains use an odd cell count with the
    impurity in the middle.
    """
    boundary = rng.choice(["PBC", "OBC"])
    if boundary == "OBC":
        n = int(rng.integers(1, (max_cells - 1) // 2 + 1)) * 2 + 1
        cell = n // 2
    else:
        n = int(rng.integers(3, max_cells))
        cell = int(rng.integers(0, n))
    v1 = float(rng.uniform(0.3, 1.5))
    w1 = -float(rng.uniform(0.3, 1.5))
    lam = 0.0 if hermitian else float(rng.uniform(0, 1))
    imp = ImpuritySpec(cell, lam, float(rng.uniform(0, 3)), float(rng.uniform(0, 3)))
    return ChainSpec(n, v1, w1, (imp,), boundary)
