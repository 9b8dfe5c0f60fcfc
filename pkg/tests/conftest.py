import itertools
from fractions import Fraction

import pytest

from horacirc.horadam import PRESETS, HoradamParams


def leibniz_det(m):
    """Determinant as the signed sum over permutations; only for tiny matrices."""
    n = len(m)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term *= m[i][j]
        total += term
    return total


def adjugate_inverse(m):
    n = len(m)
    d = leibniz_det(m)
    minor = lambda i, j: [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i]
    return [[(-1) ** (i + j) * leibniz_det(minor(j, i)) / d for j in range(n)] for i in range(n)]


def default_grid_params():
    return [
        HoradamParams(a, b, p, q)
        for a, b, p, q in itertools.product(range(-2, 3), (-2, -1, 1, 2), (1, 2, 3), (1, 2, 3))
    ]


@pytest.fixture
def fib():
    return PRESETS["fibonacci"]


@pytest.fixture
def lucas():
    return PRESETS["lucas"]


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance_log(request):
    """List that acceptance tests append their one-line verdicts to."""
    return request.config.stash[_ACCEPTANCE]


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
