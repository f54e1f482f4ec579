import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamdecomp.digraph import (
    Digraph,
    Factorization,
    HamiltonDecomposition,
    OneFactor,
    complete_digraph,
    cycle_structure,
    directed_path,
    generate,
    isomorphism_classes,
    random_regular_digraph,
    random_tournament,
    regular_tournaments,
    rotational_tournament,
    validate,
    verify_hamilton_decomposition,
)

from conftest import one_factors


def test_validate_complete_digraph():
    rep = validate(complete_digraph(4))
    assert (rep.is_regular, rep.is_oriented, rep.is_tournament) == (3, False, False)


def test_validate_rotational_tournament():
    rep = validate(rotational_tournament(5, [1, 2]))
    assert (rep.is_regular, rep.is_oriented, rep.is_tournament) == (2, True, True)


def test_validate_path_not_regular():
    rep = validate(directed_path(3))
    assert rep.is_regular is None
    assert rep.degree_table == [(0, 1, 0), (1, 1, 1), (2, 0, 1)]


def test_rejects_loops_and_simple_parallels():
    with pytest.raises(ValueError):
        Digraph(2, ((0, 0),))
    with pytest.raises(ValueError):
        Digraph(2, ((0, 1), (0, 1)))
    assert Digraph(2, ((0, 1), (0, 1)), multi=True).m == 2


@pytest.mark.parametrize(
    "succ, lengths",
    [
        ((1, 2, 3, 4, 0), [5]),
        ((2, 3, 4, 5, 0, 1), [3, 3]),
        ((1, 0, 3, 2), [2, 2]),
    ],
)
def test_cycle_structure(succ, lengths):
    assert cycle_structure(OneFactor(succ)).lengths == lengths


def test_cycle_structure_members():
    assert cycle_structure(OneFactor((2, 3, 4, 5, 0, 1))).cycles == ((0, 2, 4), (1, 3, 5))


def test_one_factor_rejects_fixed_points():
    with pytest.raises(ValueError):
        OneFactor((0, 2, 1))


def test_verify_decomposition_k3():
    g = complete_digraph(3)
    good = HamiltonDecomposition.from_lists([[0, 1, 2], [0, 2, 1]])
    assert verify_hamilton_decomposition(g, good).ok
    reuse = verify_hamilton_decomposition(g, HamiltonDecomposition.from_lists([[0, 1, 2], [0, 1, 2]]))
    assert not reuse.ok and reuse.reason == "edge-reuse"
    short = verify_hamilton_decomposition(g, HamiltonDecomposition.from_lists([[0, 1, 2]]))
    assert not short.ok and short.reason == "uncovered-edge"


def test_generators():
    assert complete_digraph(4).m == 12
    z7 = rotational_tournament(7, [1, 2, 3])
    assert z7.m == 21 and validate(z7).is_tournament and z7.regularity() == 3
    t = random_tournament(5, seed=1)
    assert t.m == 10 and validate(t).is_tournament
    assert generate("random_tournament", {"n": 5}, 1) == t


def test_generators_are_seeded():
    assert random_regular_digraph(9, 4, 3) == random_regular_digraph(9, 4, 3)
    assert random_tournament(8, 5) == random_tournament(8, 5)


def test_regular_tournament_counts():
    # labeled regular tournaments: 2 on 3 vertices, 24 on 5
    assert len(regular_tournaments(3)) == 2
    five = regular_tournaments(5)
    assert len(five) == 24
    assert len(isomorphism_classes(five)) == 1


def test_factorization_must_partition():
    g = complete_digraph(3)
    with pytest.raises(ValueError):
        Factorization(g, (OneFactor((1, 2, 0)),))


@given(one_factors())
def test_cycle_lengths_partition_vertices(f):
    cs = cycle_structure(f)
    assert sorted(v for c in cs.cycles for v in c) == list(range(f.n))
    for c in cs.cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            assert f.succ[a] == b


@settings(max_examples=30)
@given(st.integers(3, 12), st.integers(0, 10**6))
def test_random_regular_is_regular(n, seed):
    r = 1 + seed % (n - 1)
    g = random_regular_digraph(n, r, seed)
    assert g.regularity() == r
    assert validate(g).is_regular == r
