import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamdecomp.decomposer import (
    CapRefused,
    DecomposeConfig,
    NotRegular,
    ProvedNone,
    TournamentConfig,
    WeightMatrix,
    all_tours,
    atsp_domination_tour,
    decompose,
    decompose_tournament,
    domination_fraction,
    exact_decompose,
    summarize,
    tillson_decompose,
    tournament_experiment,
    tournament_trial,
)
from hamdecomp.digraph import (
    Digraph,
    HamiltonDecomposition,
    complete_digraph,
    directed_path,
    random_regular_digraph,
    regular_tournaments,
    rotational_tournament,
    verify_hamilton_decomposition,
)

from conftest import regular_digraphs


def test_decompose_rotational_z5():
    g = rotational_tournament(5)
    rep = decompose(g)
    assert rep.verdict == "success"
    assert len(rep.decomposition.cycles) == 2
    assert verify_hamilton_decomposition(g, rep.decomposition).ok
    assert isinstance(exact_decompose(g), HamiltonDecomposition)


def test_decompose_complete_4_is_proved_impossible():
    rep = decompose(complete_digraph(4))
    assert rep.verdict == "proved-impossible"
    assert rep.decomposition is None
    assert rep.stats["method"] == "exact"


def test_decompose_random_12_regular_on_20():
    g = random_regular_digraph(20, 12, seed=1)
    rep = decompose(g)
    assert rep.verdict == "success"
    assert len(rep.decomposition.cycles) == 12
    assert verify_hamilton_decomposition(g, rep.decomposition).ok


def test_decompose_reports_budget_and_hides_runtime_by_default():
    rep = decompose(rotational_tournament(7), DecomposeConfig(restarts=5, steps=30))
    assert rep.stats["restart_budget"] == 5 and rep.stats["steps_per_restart"] == 30
    assert "runtime" in rep.stats
    assert "runtime" not in rep.to_record()["stats"]
    assert "runtime" in rep.to_record(timing=True)["stats"]


def test_decompose_without_fallback_reports_failure():
    rep = decompose(complete_digraph(4), DecomposeConfig(restarts=2, exact_cap=0))
    assert rep.verdict == "failure"


def test_decompose_rejects_irregular_with_degree_table():
    with pytest.raises(NotRegular) as info:
        decompose(directed_path(3))
    assert (0, 1, 0) in info.value.table


def test_decompose_with_certificate():
    rep = decompose(complete_digraph(7), DecomposeConfig(certify=True))
    assert rep.verdict == "success"
    assert rep.certificate is not None and rep.certificate.passed
    assert rep.to_record()["certificate"]["verdict"] == "pass"


def test_parallel_restarts_match_serial():
    g = random_regular_digraph(12, 5, seed=3)
    serial = decompose(g, DecomposeConfig(seed=4))
    parallel = decompose(g, DecomposeConfig(seed=4, jobs=2))
    assert serial.to_record() == parallel.to_record()


def test_exact_complete_3():
    d = exact_decompose(complete_digraph(3))
    assert sorted(tuple(c.succ) for c in d.cycles) == [(1, 2, 0), (2, 0, 1)]


def test_exact_complete_6_proved_none():
    assert isinstance(exact_decompose(complete_digraph(6)), ProvedNone)


def test_exact_all_labeled_regular_tournaments_on_5():
    ts = regular_tournaments(5)
    assert len(ts) == 24
    for g in ts:
        d = exact_decompose(g)
        assert isinstance(d, HamiltonDecomposition)
        assert verify_hamilton_decomposition(g, d).ok


def test_exact_cap_refused():
    with pytest.raises(CapRefused):
        exact_decompose(complete_digraph(11))


def test_exact_zero_regular_is_empty_decomposition():
    d = exact_decompose(Digraph(3, ()))
    assert d.cycles == ()


@settings(max_examples=40, deadline=None)
@given(regular_digraphs(max_n=7))
def test_exact_and_switching_agree(g):
    exact = exact_decompose(g)
    rep = decompose(g, DecomposeConfig(restarts=8, exact_cap=0))
    if rep.verdict == "success":
        assert isinstance(exact, HamiltonDecomposition)
        assert verify_hamilton_decomposition(g, rep.decomposition).ok
    if isinstance(exact, HamiltonDecomposition):
        assert verify_hamilton_decomposition(g, exact).ok


def test_tillson_exceptions_small():
    for n in range(3, 9):
        d = tillson_decompose(n)
        if n in (4, 6):
            assert isinstance(d, ProvedNone)
        else:
            assert isinstance(d, HamiltonDecomposition)
            assert len(d.cycles) == n - 1
            assert verify_hamilton_decomposition(complete_digraph(n), d).ok


def test_tillson_rejects_small_n():
    with pytest.raises(ValueError):
        tillson_decompose(2)


def test_atsp_equal_weights():
    w = WeightMatrix.from_rows([[None if i == j else 3 for j in range(5)] for i in range(5)])
    res = atsp_domination_tour(w)
    assert res.weight == 15 == res.mean
    assert res.bound_check and res.route == "decomposition"
    assert res.domination_count == res.tours_total == 24


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 10**6))
def test_atsp_bound_holds(n, seed):
    w = WeightMatrix.random(n, seed)
    res = atsp_domination_tour(w, seed, brute_force=False)
    assert res.bound_check
    assert res.weight <= w.total() / (n - 1)
    assert sorted(res.tour) == list(range(n))


def test_atsp_mean_is_average_over_all_tours():
    w = WeightMatrix.random(6, seed=2)
    weights = [w.tour_weight(t) for t in all_tours(6)]
    assert len(weights) == 120
    assert sum(weights, Fraction(0)) / len(weights) == w.total() / 5


def test_atsp_domination_at_least_tours_above_mean():
    res = atsp_domination_tour(WeightMatrix.random(7, seed=11), seed=11)
    assert res.tours_total == 720
    assert res.domination_count >= res.at_least_mean
    assert domination_fraction(res) == Fraction(res.domination_count, 720)


@pytest.mark.parametrize("n", [4, 6])
def test_atsp_without_decomposition_is_labelled(n):
    res = atsp_domination_tour(WeightMatrix.random(n, seed=0))
    assert res.route == "sampled"
    # best of all tours is at most the mean
    assert res.bound_check and res.domination_count == res.tours_total


def test_atsp_rejects_negative_weights():
    with pytest.raises(ValueError):
        WeightMatrix.from_rows([[None, -1, 2], [1, None, 1], [1, 1, None]])


def test_tournament_pipeline_on_every_regular_tournament_of_order_5():
    for i, g in enumerate(regular_tournaments(5)):
        rec = decompose_tournament(g, seed=i)
        assert rec["delta0"] == 2 and rec["decomposed"]
        assert len(rec["cycles"]) == 2


def test_tournament_trials_even_order():
    recs = list(tournament_experiment(10, 6, seed=3))
    assert [r["trial"] for r in recs] == list(range(6))
    for r in recs:
        assert r["delta0"] <= 4
        assert r["extracted"]
    assert summarize(recs)["trials"] == 6


def test_tournament_trial_is_deterministic():
    a = tournament_trial(11, 4, seed=9)
    b = tournament_trial(11, 4, seed=9)
    assert a == b
    assert list(tournament_experiment(11, 3, seed=9, jobs=2)) == list(tournament_experiment(11, 3, seed=9))


def test_summarize_lists_failures():
    recs = [
        {"trial": 0, "extracted": True, "decomposed": True},
        {"trial": 1, "extracted": False, "decomposed": False},
    ]
    s = summarize(recs)
    assert s["success_rate"] == 0.5 and s["failed_trials"] == [1] and s["extracted"] == 1


def test_tournament_config_limits_extractions():
    rec = decompose_tournament(rotational_tournament(7), seed=0, config=TournamentConfig(extractions=1))
    assert rec["extraction_attempts"] == 1 and rec["decomposed"]
