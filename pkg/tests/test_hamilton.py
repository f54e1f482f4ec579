import random

from hypothesis import given, settings
from hypothesis import strategies as st

from hamdecomp.digraph import (
    Digraph,
    OneFactor,
    complete_digraph,
    directed_path,
    random_regular_digraph,
    rotational_digraph,
    rotational_tournament,
)
from hamdecomp.hamilton import NoneExists, NotFound, find_hamilton, hamilton_cycles_through


def _is_cycle_of(c, g):
    return isinstance(c, OneFactor) and c.is_hamilton() and all(g.has_edge(*e) for e in c.edges)


def test_complete_digraph():
    g = complete_digraph(5)
    assert _is_cycle_of(find_hamilton(g), g)


def test_path_has_none():
    assert isinstance(find_hamilton(directed_path(5)), NoneExists)


def test_z7_minus_a_factor():
    z7 = rotational_tournament(7)
    rest = z7.remove_edges((i, (i + 1) % 7) for i in range(7))
    assert rest == rotational_digraph(7, [2, 3])
    assert _is_cycle_of(find_hamilton(rest), rest)


def test_disconnected_is_none_at_any_size():
    two = rotational_digraph(20, [1]).edges
    g = Digraph(40, tuple(two) + tuple((u + 20, v + 20) for u, v in two))
    assert isinstance(find_hamilton(g, exact_cap=12), NoneExists)


def test_tiny_budget_gives_not_found():
    g = random_regular_digraph(30, 3, 1)
    res = find_hamilton(g, budget=5, restarts=2, exact_cap=12)
    assert isinstance(res, (NotFound, OneFactor))


def test_heuristic_above_cap():
    g = random_regular_digraph(40, 20, 2)
    assert _is_cycle_of(find_hamilton(g, exact_cap=12), g)


def test_cycles_through_counts():
    # every Hamilton cycle of K_n through a fixed edge: (n-2)! of them
    for n in range(3, 7):
        counts = [[int(u != v) for v in range(n)] for u in range(n)]
        cycles = list(hamilton_cycles_through(counts, (0, 1)))
        assert len(cycles) == [1, 2, 6, 24][n - 3]
        assert len({tuple(c) for c in cycles}) == len(cycles)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10**6))
def test_exact_search_matches_brute_force(n, seed):
    from itertools import permutations

    rng = random.Random(seed)
    g = Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.35))
    brute = any(
        all(g.has_edge(a, b) for a, b in zip((0,) + p, p + (0,))) for p in permutations(range(1, n))
    )
    res = find_hamilton(g)
    assert isinstance(res, OneFactor) == brute
    if brute:
        assert _is_cycle_of(res, g)
    else:
        assert isinstance(res, NoneExists)
