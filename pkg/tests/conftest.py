import random
from fractions import Fraction

import pytest

_ACCEPTANCE: dict = {}


def nonzero(rng: random.Random, bound: int = 1000) -> Fraction:
    x = 0
    while x == 0:
        x = rng.randint(-bound, bound)
    return Fraction(x)


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture
def acceptance():
    """Record ``(criterion, ok, detail)``; the line is printed now and in the summary."""

    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}"
        _ACCEPTANCE[n] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
