import math
from fractions import Fraction

import numpy as np
import pytest

from kickedhall.config import GOLDEN_HBAR
from kickedhall.core import Potential, SystemParams


@pytest.fixture
def cosine():
    return Potential.cosine()


@pytest.fixture
def generic_potential():
    return Potential((0.3 - 0.4j, 0.15 + 0.1j))


@pytest.fixture
def golden_params(cosine):
    """Golden-hbar wave-packet parameters at eta/(2 pi) = 2/3."""
    return SystemParams(cosine, Fraction(2, 3), 0.0, GOLDEN_HBAR, 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def circular_distance(a, b) -> float:
    """Symmetric Hausdorff distance between two sets of phases on the circle."""
    a = np.asarray(a).ravel()[:, None]
    b = np.asarray(b).ravel()[None, :]
    d = np.abs(np.angle(np.exp(1j * (a - b))))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one acceptance line, print it, then assert on it."""
    def check(label: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
