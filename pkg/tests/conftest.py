from pathlib import Path

import numpy as np
import pytest

from rotorcrypt.imaging import read_gray
from rotorcrypt.machine import Keystream

DATA = Path(__file__).parent / "data"

# Fixed keystream used wherever a test needs "a" key.
FIXED_KEY = Keystream((0x3A, 0xC5, 0x71, 0x12, 0xE0, 0x5B, 0x9D))


@pytest.fixture
def fixed_key():
    return FIXED_KEY


@pytest.fixture(scope="session")
def cameraman():
    return read_gray(DATA / "cameraman256.pgm")


@pytest.fixture(scope="session")
def astronaut():
    return read_gray(DATA / "astronaut256.pgm")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_key(rng) -> Keystream:
    return Keystream(tuple(int(v) for v in rng.integers(0, 256, 7)))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
