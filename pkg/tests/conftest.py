from fractions import Fraction

from hypothesis import strategies as st

from deeploci.braids import BraidWord


def braid_words(min_n=2, max_n=4, max_len=8):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(st.integers(1, n - 1), max_size=max_len).map(lambda ls: BraidWord(n, tuple(ls)))
    )


def fractions(max_num=9, max_den=5, nonzero=False):
    num = st.integers(-max_num, max_num)
    if nonzero:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, max_den))


def permutations(max_n=6):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(range(1, n + 1)).map(tuple))


# Acceptance results, filled in by tests/test_acceptance.py and echoed at the end of the run.
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, name = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d} {status}: {name}")
