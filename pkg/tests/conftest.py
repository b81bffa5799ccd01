import sys
from fractions import Fraction

from hypothesis import strategies as st


def small_fractions(bound=4, denominators=(1, 2, 3, 4)):
    return st.builds(Fraction, st.integers(-bound * 4, bound * 4), st.sampled_from(denominators))


def square_matrices(k, elements):
    return st.lists(st.lists(elements, min_size=k, max_size=k), min_size=k, max_size=k)


def int_matrices(k, bound=3):
    return square_matrices(k, st.integers(-bound, bound))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
