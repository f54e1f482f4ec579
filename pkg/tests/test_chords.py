import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamdecomp.chords import (
    ChordSequence,
    CycleOrder,
    chain_law_violation,
    chord_edges_of_walk,
    chord_sequence,
    default_ell,
    expand_chord_sequence,
    shifted_walk,
    universal_walk,
    verify_local_balance,
    verify_universal_walk,
)
from hamdecomp.digraph import complete_digraph, random_regular_digraph, rotational_tournament
from hamdecomp.hamilton import NotFound, find_hamilton


def natural(n):
    return CycleOrder(tuple(range(n)))


# the twelve-cycle example: V1..V12 become 0..11
FIGURE_CS = [(1, 9), (8, 3), (2, 11), (10, 8), (7, 4), (3, 6)]
FIGURE_CLOSING = (5, 2)


def test_figure_example_is_balanced():
    C = natural(12)
    assert verify_local_balance(C, FIGURE_CS + [FIGURE_CLOSING])
    cs = ChordSequence(2, 6, tuple(FIGURE_CS), ())
    assert chain_law_violation(C, cs) is None


def test_removing_a_chord_unbalances():
    C = natural(12)
    for i in range(len(FIGURE_CS)):
        edges = FIGURE_CS[:i] + FIGURE_CS[i + 1 :] + [FIGURE_CLOSING]
        assert not verify_local_balance(C, edges)


def test_empty_multiset_balanced():
    assert verify_local_balance(natural(5), [])


def test_same_endpoints():
    g = complete_digraph(5)
    cs = chord_sequence(g, natural(5), 2, 2)
    assert cs.edges == ()
    assert shifted_walk(g, natural(5), 2, 2) == [2]


def test_complete_digraph_single_chord():
    g, C = complete_digraph(5), natural(5)
    for A in range(5):
        for B in range(5):
            cs = chord_sequence(g, C, A, B)
            assert chain_law_violation(C, cs) is None
            if B == A:
                assert cs.edges == ()
            elif B == C.pred(A):
                # A- -> A- would be a loop, so two chords are needed
                assert len(cs) == 2
            else:
                assert cs.edges == ((C.pred(A), B),)


def test_shifted_walk_traverses_cycle_once():
    g, C = complete_digraph(5), natural(5)
    walk = shifted_walk(g, C, 1, 3)
    assert walk == [1, 2, 3, 4, 0, 3]
    cs = chord_sequence(g, C, 1, 3)
    assert chord_edges_of_walk(C, walk) == list(cs.edges)


def test_z11_forbidden_vertices():
    g = rotational_tournament(11)
    C = CycleOrder.on(g, find_hamilton(g).cycle_from(0))
    nu = Fraction(1, 11)
    forbidden = {4, 7}
    for A in range(11):
        for B in range(11):
            with pytest.warns(UserWarning):
                cs = chord_sequence(g, C, A, B, forbidden, nu=nu)
            assert not isinstance(cs, NotFound)
            assert len(cs) <= 33
            assert not set(cs.interior) & forbidden
            assert chain_law_violation(C, cs) is None


def test_unreachable_reports_not_found():
    g, C = complete_digraph(6), natural(6)
    res = chord_sequence(g, C, 1, 0, forbidden=range(6), max_edges=4)
    assert isinstance(res, NotFound)


@settings(max_examples=60, deadline=None)
@given(st.integers(5, 14), st.integers(0, 10**6), st.data())
def test_sequences_are_balanced(n, seed, data):
    g = random_regular_digraph(n, max(2, (2 * n) // 3), seed)
    ham = find_hamilton(g)
    if not hasattr(ham, "succ"):
        return
    C = CycleOrder.on(g, ham.cycle_from(0))
    A = data.draw(st.integers(0, n - 1))
    B = data.draw(st.integers(0, n - 1))
    forbidden = data.draw(st.sets(st.integers(0, n - 1), max_size=2))
    cs = chord_sequence(g, C, A, B, forbidden)
    if isinstance(cs, NotFound):
        return
    assert chain_law_violation(C, cs) is None
    assert not set(cs.interior) & forbidden
    assert verify_local_balance(C, list(cs.edges) + ([(C.pred(B), A)] if A != B else []))
    assert chord_edges_of_walk(C, expand_chord_sequence(C, cs)) == list(cs.edges)


@pytest.mark.parametrize("k", [3, 5, 7])
@pytest.mark.parametrize("ell", [4, 9])
def test_universal_walk_complete(k, ell):
    g, C = complete_digraph(k), natural(k)
    U = universal_walk(g, C, ell)
    assert verify_universal_walk(g, C, U).ok
    assert len(U.edges) == k * ell


def test_universal_walk_k3_length():
    U = universal_walk(complete_digraph(3), natural(3), 4)
    assert len(U.edges) == 12
    assert all(cs.edges == ((C_pred, C_next),) for cs, (C_pred, C_next) in zip(U.ecs, [(2, 1), (0, 2), (1, 0)]))


def test_universal_walk_record_roles():
    U = universal_walk(complete_digraph(5), natural(5), 4)
    rec = U.to_record()
    assert {role for *_, role in rec["edges"]} == {"chord", "cyclic"}
    assert sum(role == "chord" for *_, role in rec["edges"]) == sum(len(cs) for cs in U.ecs)


def test_verifier_rejects_tampering():
    g, C = complete_digraph(5), natural(5)
    U = universal_walk(g, C, 4)
    broken = type(U)(U.edges[:-1], U.ell, U.ecs, U.assignment[:-1])
    assert not verify_universal_walk(g, C, broken).ok


def test_default_ell():
    assert default_ell(Fraction(1, 2)) == 144


@settings(max_examples=20, deadline=None)
@given(st.integers(6, 11), st.integers(0, 10**6), st.sampled_from([9, 16, 25]))
def test_universal_walk_on_dense_random(n, seed, ell):
    g = random_regular_digraph(n, n - 2, seed)
    ham = find_hamilton(g)
    C = CycleOrder.on(g, ham.cycle_from(0))
    U = universal_walk(g, C, ell)
    if isinstance(U, NotFound):
        return
    assert verify_universal_walk(g, C, U).ok
