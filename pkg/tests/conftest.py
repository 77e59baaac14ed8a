import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from klideals.perm import Permutation, gamma  # noqa: E402
from oracles import random_pairs  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def permutations(min_n=1, max_n=6):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.permutations(range(1, n + 1)).map(Permutation))


def perm_pairs(n):
    return st.tuples(st.permutations(range(1, n + 1)), st.permutations(range(1, n + 1))).map(
        lambda ab: (Permutation(ab[0]), Permutation(ab[1])))


@pytest.fixture(scope="session")
def gamma4():
    return gamma(4)


@pytest.fixture(scope="session")
def gamma5():
    return gamma(5)


@pytest.fixture(scope="session")
def gamma5_sample(gamma5):
    return random_pairs(gamma5, 200, seed=2024)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(results):
        terminalreporter.write_line(line)
