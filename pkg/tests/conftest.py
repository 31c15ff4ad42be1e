from fractions import Fraction

from hypothesis import settings, strategies as st

from trialg.borel import BorelSet

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def borel_sets(draw, denominator=12, max_pieces=4):
    n = draw(st.integers(0, max_pieces))
    pieces = []
    for _ in range(n):
        a, b = sorted(draw(st.lists(st.integers(0, denominator), min_size=2, max_size=2, unique=True)))
        pieces.append((Fraction(a, denominator), Fraction(b, denominator)))
    return BorelSet(pieces)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
