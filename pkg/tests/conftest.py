import random
from fractions import Fraction

import pytest

from qregular.core import LinearRepresentation, is_zero_consistent
from qregular.dandc import minmax_fixture
from qregular.sequences import (
    binary_sum_of_digits,
    nilpotent_example,
    thue_morse_pm,
    zero_two_scalar,
)


def random_representation(rng: random.Random, q: int | None = None,
                          dim: int | None = None) -> LinearRepresentation:
    """Random rep with integer entries in [-2, 2] satisfying ``A_0 w = w``."""
    q = q or rng.choice((2, 3))
    dim = dim or rng.randint(1, 3)
    entry = lambda: rng.randint(-2, 2)  # noqa: E731
    while True:
        matrices = [[[entry() for _ in range(dim)] for _ in range(dim)] for _ in range(q)]
        w = [entry() for _ in range(dim)]
        if not any(w):
            continue
        u = [entry() for _ in range(dim)]
        rep = LinearRepresentation.build(q, u, matrices, w)
        if is_zero_consistent(rep):
            return rep


def random_corpus(size: int, seed: int = 2024) -> list[LinearRepresentation]:
    rng = random.Random(seed)
    return [random_representation(rng) for _ in range(size)]


@pytest.fixture(scope="session")
def s2():
    return binary_sum_of_digits()


@pytest.fixture(scope="session")
def tm():
    return thue_morse_pm()


@pytest.fixture(scope="session")
def zero2():
    return zero_two_scalar()


@pytest.fixture(scope="session")
def nilpotent():
    return nilpotent_example()


@pytest.fixture(scope="session")
def minmax():
    return minmax_fixture()


def F(*values):
    return [Fraction(v) for v in values]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
