import random
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamdecomp.digraph import (
    Digraph,
    complete_digraph,
    directed_cycle,
    directed_path,
    random_regular_digraph,
    random_tournament,
    rotational_tournament,
)
from hamdecomp.flow import (
    DegreePrescription,
    Infeasible,
    cover_exceptional_edges,
    cut_capacity,
    degree_prescribed_subdigraph,
    greedy_edge_colouring,
    hall_violator,
    hamilton_through_matching,
    max_bipartite_matching,
    max_flow,
    one_factorization,
    prescription_network,
    regular_spanning_subdigraph,
)

from conftest import regular_digraphs


def test_matching_examples():
    assert len(max_bipartite_matching(3, 3, [[0, 1, 2]] * 3)) == 3
    assert len(max_bipartite_matching(1, 3, [[0, 1, 2]])) == 1
    adj = [[0, 1]] * 3
    m = max_bipartite_matching(3, 2, adj)
    assert len(m) == 2
    X = hall_violator(3, adj, m)
    assert len(X) == 3 and len({v for u in X for v in adj[u]}) < len(X)


@settings(max_examples=60)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 10**6))
def test_matching_size_matches_networkx(nl, nr, seed):
    rng = random.Random(seed)
    adj = [[v for v in range(nr) if rng.random() < 0.4] for _ in range(nl)]
    m = max_bipartite_matching(nl, nr, adj)
    assert len(set(m.values())) == len(m)
    assert all(v in adj[u] for u, v in m.items())
    B = nx.Graph()
    B.add_nodes_from(("L", u) for u in range(nl))
    B.add_nodes_from(("R", v) for v in range(nr))
    B.add_edges_from((("L", u), ("R", v)) for u in range(nl) for v in adj[u])
    ref = nx.bipartite.maximum_matching(B, top_nodes=[("L", u) for u in range(nl)])
    assert len(m) == len(ref) // 2


def test_one_factorization_examples():
    tri = directed_cycle(3)
    assert [f.succ for f in one_factorization(tri).factors] == [(1, 2, 0)]
    k3 = one_factorization(complete_digraph(3))
    assert sorted(f.succ for f in k3.factors) == [(1, 2, 0), (2, 0, 1)]
    z5 = one_factorization(rotational_tournament(5))
    assert z5.r == 2


def test_one_factorization_rejects_irregular():
    with pytest.raises(ValueError):
        one_factorization(directed_path(3))


@given(regular_digraphs(max_n=12))
def test_one_factorization_partitions(g):
    f = one_factorization(g)
    assert f.r == g.regularity()
    assert Counter(e for F in f.factors for e in F.edges) == g.multiplicity


def test_one_factorization_of_multigraph():
    g = Digraph(3, ((0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)), multi=True)
    f = one_factorization(g)
    assert [F.succ for F in f.factors] == [(1, 2, 0), (1, 2, 0)]


def _check_targets(h, g, p):
    assert h.out_degrees == p.out_target and h.in_degrees == p.in_target
    assert not (Counter(h.edges) - g.multiplicity)


def test_prescription_examples():
    g = complete_digraph(5)
    p = DegreePrescription.uniform(5, 2)
    _check_targets(degree_prescribed_subdigraph(g, p), g, p)
    bad = degree_prescribed_subdigraph(directed_path(3), DegreePrescription.uniform(3, 1))
    assert isinstance(bad, Infeasible) and bad.capacity < bad.required


def test_tournament_extraction():
    g = random_tournament(15, 42)
    d = g.min_semidegree()
    h = regular_spanning_subdigraph(g, d)
    assert h.regularity() == d and set(h.edges) <= set(g.edges)
    g9 = random_tournament(9, 3)
    assert regular_spanning_subdigraph(g9, g9.min_semidegree()).regularity() == g9.min_semidegree()


def test_regular_subdigraph_examples():
    z7 = rotational_tournament(7)
    assert regular_spanning_subdigraph(z7, 3) == z7
    for g in (z7, random_tournament(11, 4)):
        bad = regular_spanning_subdigraph(g, g.min_semidegree() + 1)
        assert isinstance(bad, Infeasible)
        assert cut_capacity(bad.network, bad.source_side) == bad.capacity < bad.required


def test_prescription_sum_mismatch():
    with pytest.raises(ValueError):
        DegreePrescription((1, 1), (1, 0))


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 20), st.integers(0, 10**6))
def test_flow_value_matches_networkx(n, seed):
    rng = random.Random(seed)
    g = Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.6))
    outs = [rng.randint(0, max(0, d)) for d in g.out_degrees]
    ins = [0] * n
    for _ in range(sum(outs)):
        ins[rng.randrange(n)] += 1
    p = DegreePrescription(tuple(outs), tuple(ins))
    net = prescription_network(g, p)
    value, flows, side = max_flow(net)
    G = nx.DiGraph()
    for u, v, c in net.arcs:
        G.add_edge(u, v, capacity=c)
    assert value == nx.maximum_flow_value(G, net.source, net.sink)
    assert cut_capacity(net, side) == value
    res = degree_prescribed_subdigraph(g, p)
    if value == p.total:
        _check_targets(res, g, p)
    else:
        assert isinstance(res, Infeasible) and res.capacity < p.total


def test_hamilton_through_matching_examples():
    c = hamilton_through_matching(complete_digraph(5), [(0, 1)])
    assert c.is_hamilton() and c.succ[0] == 1
    cyc = directed_cycle(5)
    assert hamilton_through_matching(cyc, [(2, 3)]).edges == tuple(sorted(cyc.edges))
    with pytest.raises(ValueError):
        hamilton_through_matching(complete_digraph(4), [(0, 1), (1, 2), (2, 0)])


@settings(max_examples=30, deadline=None)
@given(st.integers(5, 12), st.integers(0, 10**6))
def test_hamilton_through_matching_contains_matching(n, seed):
    rng = random.Random(seed)
    g = random_regular_digraph(n, n - 2, seed)
    M = []
    used = set()
    for u, v in rng.sample(sorted(g.edges), 3):
        if u not in used and v not in used:
            M.append((u, v))
            used |= {u, v}
    res = hamilton_through_matching(g, M)
    if hasattr(res, "succ"):
        assert res.is_hamilton() and all(res.succ[a] == b for a, b in M)


def test_colouring_is_proper():
    edges = [(0, 1), (1, 0), (1, 2), (2, 0), (0, 2)]
    classes = greedy_edge_colouring(edges)
    assert sorted(e for c in classes for e in c) == sorted(edges)
    for c in classes:
        ends = [v for e in c for v in e]
        assert len(ends) == len(set(ends))


def test_cover_examples():
    g = complete_digraph(6)
    assert cover_exceptional_edges(g, [0]).cycles == []
    indep = cover_exceptional_edges(directed_cycle(6), [0, 2, 4])
    assert indep.cycles == [] and indep.complete
    res = cover_exceptional_edges(g, [0, 1])
    assert res.complete and len(res.cycles) <= 2
    covered = {e for c in res.cycles for e in c.edges}
    assert {(0, 1), (1, 0)} <= covered
    assert len(covered) == 6 * len(res.cycles)
