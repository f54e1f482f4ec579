"""Matching and flow primitives.

Bipartite maximum matching (Hopcroft-Karp), 1-factorization of regular
multidigraphs by repeated perfect matchings, degree-prescribed spanning
subdigraphs by integral max-flow with a min-cut infeasibility witness, and
Hamilton cycles forced through a prescribed matching by contraction.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .digraph import Digraph, Edge, Factorization, OneFactor
from .hamilton import DEFAULT_BUDGET, NoneExists, NotFound, find_hamilton

log = logging.getLogger(__name__)

INF = float("inf")


# bipartite matching

def max_bipartite_matching(n_left: int, n_right: int, adj: Sequence[Iterable[int]]) -> dict[int, int]:
    """Maximum matching as a map left -> right.

    Neighbour lists are scanned in increasing order, so among equal-length
    augmenting paths the lowest-index one wins and the output is deterministic.
    """
    nbrs = [sorted(set(a)) for a in adj]
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        q = deque()
        found = False
        for u in range(n_left):
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = -1
        while q:
            u = q.popleft()
            for v in nbrs[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in nbrs[u]:
            w = match_r[v]
            if w < 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = -1
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] < 0:
                dfs(u)
    return {u: v for u, v in enumerate(match_l) if v >= 0}


def hall_violator(n_left: int, adj: Sequence[Iterable[int]], matching: dict[int, int]) -> set[int] | None:
    """Left set X with |N(X)| < |X|, from the alternating-path closure of an
    unmatched left vertex; None if the matching saturates the left side."""
    free = [u for u in range(n_left) if u not in matching]
    if not free:
        return None
    match_r = {v: u for u, v in matching.items()}
    xs = {free[0]}
    stack = [free[0]]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            w = match_r.get(v)
            if w is not None and w not in xs:
                xs.add(w)
                stack.append(w)
    return xs


def one_factorization(g: Digraph) -> Factorization:
    """Split a regular multidigraph into 1-factors.

    Each round takes a perfect matching of the bipartite multigraph with both
    sides a copy of V(g) and one edge per directed edge, then deletes it.
    """
    r = g.regularity()
    if r is None:
        raise ValueError("one_factorization needs a regular digraph")
    counts = [[0] * g.n for _ in range(g.n)]
    for u, v in g.edges:
        counts[u][v] += 1
    factors = []
    for _ in range(r):
        adj = [[v for v in range(g.n) if counts[u][v] > 0] for u in range(g.n)]
        m = max_bipartite_matching(g.n, g.n, adj)
        if len(m) != g.n:
            raise RuntimeError("regular bipartite multigraph without a perfect matching")
        for u, v in m.items():
            counts[u][v] -= 1
        factors.append(OneFactor(tuple(m[u] for u in range(g.n))))
    return Factorization(g, tuple(factors))


# max-flow

@dataclass(frozen=True)
class FlowNetwork:
    num_nodes: int
    arcs: tuple[tuple[int, int, int], ...]
    source: int
    sink: int
    labels: tuple[object, ...] = ()


def max_flow(net: FlowNetwork) -> tuple[int, list[int], frozenset[int]]:
    """Dinic. Returns (value, flow per arc, source side of a minimum cut)."""
    n = net.num_nodes
    graph: list[list[int]] = [[] for _ in range(n)]
    to: list[int] = []
    cap: list[int] = []
    for u, v, c in net.arcs:
        if c < 0:
            raise ValueError("negative capacity")
        graph[u].append(len(to))
        to.append(v)
        cap.append(c)
        graph[v].append(len(to))
        to.append(u)
        cap.append(0)
    s, t = net.source, net.sink
    value = 0
    level = [0] * n

    def bfs() -> bool:
        for i in range(n):
            level[i] = -1
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in graph[u]:
                if cap[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[u] + 1
                    q.append(to[e])
        return level[t] >= 0

    def dfs(u: int, pushed: float, it: list[int]) -> int:
        if u == t:
            return int(pushed)
        while it[u] < len(graph[u]):
            e = graph[u][it[u]]
            v = to[e]
            if cap[e] > 0 and level[v] == level[u] + 1:
                got = dfs(v, min(pushed, cap[e]), it)
                if got:
                    cap[e] -= got
                    cap[e ^ 1] += got
                    return got
            it[u] += 1
        return 0

    while bfs():
        it = [0] * n
        while True:
            f = dfs(s, INF, it)
            if not f:
                break
            value += f
    # residual reachability from the source gives the min cut
    seen = {s}
    q = deque([s])
    while q:
        u = q.popleft()
        for e in graph[u]:
            if cap[e] > 0 and to[e] not in seen:
                seen.add(to[e])
                q.append(to[e])
    flows = [cap[2 * i + 1] for i in range(len(net.arcs))]
    return value, flows, frozenset(seen)


def cut_capacity(net: FlowNetwork, source_side: Iterable[int]) -> int:
    side = set(source_side)
    return sum(c for u, v, c in net.arcs if u in side and v not in side)


# degree prescriptions

@dataclass(frozen=True)
class DegreePrescription:
    out_target: tuple[int, ...]
    in_target: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "out_target", tuple(self.out_target))
        object.__setattr__(self, "in_target", tuple(self.in_target))
        if len(self.out_target) != len(self.in_target):
            raise ValueError("out and in target tables differ in length")
        if any(x < 0 for x in self.out_target + self.in_target):
            raise ValueError("targets must be non-negative")
        if sum(self.out_target) != sum(self.in_target):
            raise ValueError(
                f"sum of out targets {sum(self.out_target)} != sum of in targets {sum(self.in_target)}"
            )

    @classmethod
    def uniform(cls, n: int, r: int) -> "DegreePrescription":
        return cls(tuple([r] * n), tuple([r] * n))

    @property
    def total(self) -> int:
        return sum(self.out_target)


@dataclass(frozen=True)
class Infeasible:
    """No subdigraph meets the prescription; ``source_side`` is a cut of
    ``network`` whose capacity is below ``required``."""

    network: FlowNetwork
    source_side: frozenset[int]
    capacity: int
    required: int
    reason: str = "max-flow below prescribed total"


def prescription_network(g: Digraph, p: DegreePrescription, order: Sequence[Edge] | None = None) -> FlowNetwork:
    """Source 0, out-copies 1..n, in-copies n+1..2n, sink 2n+1."""
    n = g.n
    s, t = 0, 2 * n + 1
    arcs = [(s, 1 + x, p.out_target[x]) for x in range(n)]
    mult = g.multiplicity
    pairs = list(dict.fromkeys(order)) if order is not None else sorted(mult)
    arcs += [(1 + u, 1 + n + v, mult[(u, v)]) for u, v in pairs]
    arcs += [(1 + n + y, t, p.in_target[y]) for y in range(n)]
    labels = ("s*",) + tuple(("out", x) for x in range(n)) + tuple(("in", y) for y in range(n)) + ("t*",)
    return FlowNetwork(2 * n + 2, tuple(arcs), s, t, labels)


def degree_prescribed_subdigraph(
    g: Digraph, p: DegreePrescription, order: Sequence[Edge] | None = None
) -> Digraph | Infeasible:
    """Spanning subdigraph with outdegree ``out_target[x]`` and indegree
    ``in_target[x]`` at every vertex, or a min-cut witness that none exists.

    ``order`` fixes the arc order of the network (the solver's tie-breaking),
    which lets callers draw different solutions from the same graph.
    """
    if len(p.out_target) != g.n:
        raise ValueError(f"prescription covers {len(p.out_target)} vertices, graph has {g.n}")
    net = prescription_network(g, p, order)
    value, flows, side = max_flow(net)
    if value < p.total:
        return Infeasible(net, side, cut_capacity(net, side), p.total)
    n = g.n
    chosen: list[Edge] = []
    for (u, v, _), f in zip(net.arcs, flows):
        if 1 <= u <= n and f:
            chosen += [(u - 1, v - 1 - n)] * f
    return Digraph(n, tuple(chosen), g.multi)


def regular_spanning_subdigraph(g: Digraph, r: int, order: Sequence[Edge] | None = None) -> Digraph | Infeasible:
    p = DegreePrescription.uniform(g.n, r)
    if g.n and r > g.min_semidegree():
        # a vertex whose degree is below r isolates a cut of capacity < rn
        net = prescription_network(g, p, order)
        n = g.n
        low_out = [x for x in range(n) if g.out_degrees[x] < r]
        if low_out:
            side = frozenset({0, 1 + low_out[0]})
        else:
            y = next(x for x in range(n) if g.in_degrees[x] < r)
            side = frozenset(range(net.num_nodes)) - {1 + n + y, net.sink}
        return Infeasible(net, side, cut_capacity(net, side), p.total, "r exceeds minimum semidegree")
    return degree_prescribed_subdigraph(g, p, order)


# Hamilton cycles through prescribed edges

def _matching_paths(g: Digraph, M: Iterable[Edge]) -> list[list[int]]:
    M = list(dict.fromkeys((int(a), int(b)) for a, b in M))
    for a, b in M:
        if not g.has_edge(a, b):
            raise ValueError(f"matching edge ({a}, {b}) is not in the digraph")
    nxt: dict[int, int] = {}
    prv: dict[int, int] = {}
    for a, b in M:
        if a in nxt or b in prv:
            raise ValueError("prescribed edges are not a matching (degree above 1)")
        nxt[a] = b
        prv[b] = a
    paths = []
    seen: set[int] = set()
    for a in sorted(nxt):
        if a in prv:
            continue
        path = [a]
        while path[-1] in nxt:
            path.append(nxt[path[-1]])
        seen.update(path)
        paths.append(path)
    if len(seen) != len(set(nxt) | set(prv)):
        raise ValueError("prescribed edges contain a directed cycle")
    return paths


def hamilton_through_matching(
    g: Digraph, M: Iterable[Edge], budget: int | None = DEFAULT_BUDGET, seed: int = 0
) -> OneFactor | NotFound | NoneExists:
    """Hamilton cycle of ``g`` containing every edge of ``M``.

    Each maximal path of ``M`` is contracted to one vertex with the
    inneighbours of its first and the outneighbours of its last vertex.
    """
    paths = _matching_paths(g, M)
    in_path = {v for p in paths for v in p}
    # contracted vertex k stands for the segment segs[k]
    segs = [p for p in paths] + [[v] for v in range(g.n) if v not in in_path]
    segs.sort(key=lambda s: s[0])
    head = {s[0]: k for k, s in enumerate(segs)}
    k = len(segs)
    if k == 1:
        seg = segs[0]
        if len(seg) >= 2 and g.has_edge(seg[-1], seg[0]):
            return OneFactor.from_cycle(seg)
        return NoneExists("prescribed path cannot be closed")
    edges = set()
    for i, seg in enumerate(segs):
        for w in g.out_neighbours[seg[-1]]:
            j = head.get(w)
            if j is not None and j != i:
                edges.add((i, j))
    res = find_hamilton(Digraph(k, tuple(edges)), budget=budget, seed=seed)
    if not isinstance(res, OneFactor):
        return res
    order = res.cycle_from(0)
    return OneFactor.from_cycle([v for i in order for v in segs[i]])


def greedy_edge_colouring(edges: Sequence[Edge]) -> list[list[Edge]]:
    """Partition edges into matchings of the underlying undirected multigraph;
    lowest free colour per edge, edges in lexicographic order (at most 2D-1 colours)."""
    colours: list[list[Edge]] = []
    used: dict[int, set[int]] = {}
    for a, b in sorted(edges):
        busy = used.setdefault(a, set()) | used.setdefault(b, set())
        c = 0
        while c in busy:
            c += 1
        if c == len(colours):
            colours.append([])
        colours[c].append((a, b))
        used[a].add(c)
        used[b].add(c)
    return colours


@dataclass
class CoverResult:
    cycles: list[OneFactor]
    complete: bool
    failures: list[dict] = field(default_factory=list)


def cover_exceptional_edges(
    g: Digraph, V0: Iterable[int], budget: int | None = DEFAULT_BUDGET, seed: int = 0
) -> CoverResult:
    """Edge-disjoint Hamilton cycles of ``g`` that together contain every edge
    of ``g[V0]``: one cycle per colour class, largest class first."""
    v0 = set(V0)
    inner = [e for e in g.edges if e[0] in v0 and e[1] in v0]
    classes = greedy_edge_colouring(inner)
    classes.sort(key=len, reverse=True)
    remaining = g
    result = CoverResult([], True)
    for idx, M in enumerate(classes):
        res = hamilton_through_matching(remaining, M, budget=budget, seed=seed + idx)
        if isinstance(res, OneFactor):
            result.cycles.append(res)
            remaining = remaining.remove_edges(res.edges)
        else:
            result.complete = False
            result.failures.append({"matching": M, "reason": res.reason})
            log.info("matching %s could not be placed: %s", M, res.reason)
    return result
