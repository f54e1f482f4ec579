import random

from hypothesis import strategies as st

from hamdecomp.digraph import OneFactor, random_regular_digraph


@st.composite
def regular_digraphs(draw, min_n=3, max_n=9):
    n = draw(st.integers(min_n, max_n))
    r = draw(st.integers(1, n - 1))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_regular_digraph(n, r, seed)


@st.composite
def one_factors(draw, min_n=2, max_n=12):
    n = draw(st.integers(min_n, max_n))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    while True:
        perm = list(range(n))
        rng.shuffle(perm)
        if all(p != v for v, p in enumerate(perm)):
            return OneFactor(tuple(perm))


# Acceptance criteria append (name, passed, detail, extra lines) here; the
# lines are repeated at the end of the run so they survive output capture.
ACCEPTANCE: list[tuple[str, bool, str, list[str]]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail, extra in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        for line in extra:
            terminalreporter.write_line(f"      {line}")
