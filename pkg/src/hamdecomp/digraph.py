"""Directed-graph substrate.

Vertices are dense integers ``0..n-1``. A :class:`Digraph` is an immutable
edge multiset; simple mode (no parallel edges) is the default and is
enforced at construction. Loops are never allowed.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: tuple[Edge, ...]
    multi: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"vertex count must be non-negative, got {self.n}")
        edges = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if not self.multi:
            for a, b in zip(edges, edges[1:]):
                if a == b:
                    raise ValueError(f"parallel edge {a} in a simple digraph")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], multi: bool = False) -> "Digraph":
        return cls(n, tuple(edges), multi)

    @cached_property
    def multiplicity(self) -> Counter:
        return Counter(self.edges)

    @cached_property
    def out_neighbours(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            out[u].append(v)
        return tuple(tuple(sorted(set(a))) for a in out)

    @cached_property
    def in_neighbours(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            inn[v].append(u)
        return tuple(tuple(sorted(set(a))) for a in inn)

    @cached_property
    def out_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, _ in self.edges:
            deg[u] += 1
        return tuple(deg)

    @cached_property
    def in_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for _, v in self.edges:
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def adjacency(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.adjacency

    @property
    def m(self) -> int:
        return len(self.edges)

    def min_semidegree(self) -> int:
        if self.n == 0:
            return 0
        return min(min(self.out_degrees), min(self.in_degrees))

    def regularity(self) -> int | None:
        """Common in/out degree if every vertex has the same one, else None."""
        if self.n == 0:
            return 0
        degs = set(self.out_degrees) | set(self.in_degrees)
        return degs.pop() if len(degs) == 1 else None

    def remove_edges(self, edges: Iterable[Edge]) -> "Digraph":
        left = Counter(self.edges)
        left.subtract(Counter(edges))
        if any(c < 0 for c in left.values()):
            raise ValueError("removing an edge that is not present")
        return Digraph(self.n, tuple(left.elements()), self.multi)

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Image of the digraph under the vertex map ``v -> perm[v]``."""
        return Digraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges), self.multi)


@dataclass(frozen=True)
class OneFactor:
    """Spanning 1-regular digraph stored as a successor table."""

    succ: tuple[int, ...]

    def __post_init__(self) -> None:
        succ = tuple(int(s) for s in self.succ)
        n = len(succ)
        if sorted(succ) != list(range(n)):
            raise ValueError("successor table is not a permutation")
        if any(s == v for v, s in enumerate(succ)):
            raise ValueError("a 1-factor has no fixed points")
        object.__setattr__(self, "succ", succ)

    @property
    def n(self) -> int:
        return len(self.succ)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple((v, s) for v, s in enumerate(self.succ))

    @cached_property
    def pred(self) -> tuple[int, ...]:
        pred = [0] * self.n
        for v, s in enumerate(self.succ):
            pred[s] = v
        return tuple(pred)

    def num_cycles(self) -> int:
        return len(cycle_structure(self).cycles)

    def is_hamilton(self) -> bool:
        return self.n >= 2 and self.num_cycles() == 1

    @classmethod
    def from_cycle(cls, cycle: Sequence[int]) -> "OneFactor":
        succ = [0] * len(cycle)
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            succ[a] = b
        return cls(tuple(succ))

    def cycle_from(self, start: int = 0) -> list[int]:
        out = [start]
        v = self.succ[start]
        while v != start:
            out.append(v)
            v = self.succ[v]
        return out


@dataclass(frozen=True)
class CycleStructure:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]


def cycle_structure(f: OneFactor) -> CycleStructure:
    """Orbits of the successor map, each listed from its smallest vertex."""
    seen = [False] * f.n
    cycles = []
    for start in range(f.n):
        if seen[start]:
            continue
        cyc = []
        v = start
        while not seen[v]:
            seen[v] = True
            cyc.append(v)
            v = f.succ[v]
        cycles.append(tuple(cyc))
    return CycleStructure(tuple(cycles))


def cycle_ids(succ: Sequence[int]) -> tuple[list[int], int]:
    """Cycle index of every vertex, and the number of cycles."""
    n = len(succ)
    cid = [-1] * n
    count = 0
    for start in range(n):
        if cid[start] >= 0:
            continue
        v = start
        while cid[v] < 0:
            cid[v] = count
            v = succ[v]
        count += 1
    return cid, count


@dataclass(frozen=True)
class Factorization:
    host: Digraph
    factors: tuple[OneFactor, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.n != self.host.n:
                raise ValueError("factor vertex set differs from host")
        union = Counter(e for f in self.factors for e in f.edges)
        if union != self.host.multiplicity:
            raise ValueError("factors do not partition the host edge multiset")

    @property
    def r(self) -> int:
        return len(self.factors)

    def cycle_counts(self) -> list[int]:
        return [f.num_cycles() for f in self.factors]


@dataclass(frozen=True)
class HamiltonDecomposition:
    cycles: tuple[OneFactor, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cycles", tuple(self.cycles))

    def as_lists(self) -> list[list[int]]:
        return [c.cycle_from(0) for c in self.cycles]

    @classmethod
    def from_lists(cls, cycles: Iterable[Sequence[int]]) -> "HamiltonDecomposition":
        return cls(tuple(OneFactor.from_cycle(c) for c in cycles))


@dataclass(frozen=True)
class ValidationReport:
    is_regular: int | None
    is_oriented: bool
    is_tournament: bool
    out_degrees: tuple[int, ...]
    in_degrees: tuple[int, ...]

    @property
    def degree_table(self) -> list[tuple[int, int, int]]:
        return [(v, o, i) for v, (o, i) in enumerate(zip(self.out_degrees, self.in_degrees))]


def validate(g: Digraph) -> ValidationReport:
    pairs = g.adjacency
    oriented = all((v, u) not in pairs for u, v in pairs)
    tournament = oriented and g.m == len(pairs) == g.n * (g.n - 1) // 2
    return ValidationReport(
        is_regular=g.regularity(),
        is_oriented=oriented,
        is_tournament=tournament,
        out_degrees=g.out_degrees,
        in_degrees=g.in_degrees,
    )


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    reason: str = ""
    witness: object = None


def verify_hamilton_decomposition(g: Digraph, d: HamiltonDecomposition) -> VerifyReport:
    """Accept iff every member is a Hamilton cycle of ``g`` and together they
    partition ``E(g)`` as a multiset."""
    used: Counter = Counter()
    host = g.multiplicity
    for idx, cyc in enumerate(d.cycles):
        if cyc.n != g.n:
            return VerifyReport(False, "vertex-count", idx)
        if not cyc.is_hamilton():
            return VerifyReport(False, "not-hamilton", idx)
        for e in cyc.edges:
            used[e] += 1
            if used[e] > host.get(e, 0):
                reason = "edge-reuse" if host.get(e, 0) else "foreign-edge"
                return VerifyReport(False, reason, e)
    for e in sorted(host):
        if used[e] < host[e]:
            return VerifyReport(False, "uncovered-edge", e)
    return VerifyReport(True)


# generators

def complete_digraph(n: int) -> Digraph:
    if n < 1:
        raise ValueError("complete digraph needs n >= 1")
    return Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v))


def directed_cycle(n: int) -> Digraph:
    if n < 2:
        raise ValueError("a directed cycle needs n >= 2")
    return Digraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def directed_path(n: int) -> Digraph:
    return Digraph(n, tuple((i, i + 1) for i in range(n - 1)))


def rotational_digraph(n: int, offsets: Iterable[int]) -> Digraph:
    """Circulant digraph on Z_n with ``i -> i+s`` for every offset ``s``."""
    offs = sorted({s % n for s in offsets})
    if 0 in offs:
        raise ValueError("offset 0 would create loops")
    return Digraph(n, tuple((i, (i + s) % n) for i in range(n) for s in offs))


def rotational_tournament(n: int, offsets: Iterable[int] | None = None) -> Digraph:
    if offsets is None:
        if n % 2 == 0:
            raise ValueError("a regular rotational tournament needs odd n")
        offsets = range(1, (n - 1) // 2 + 1)
    offs = {s % n for s in offsets}
    if any((-s) % n in offs for s in offs) or len(offs) != (n - 1) // 2 or n % 2 == 0:
        raise ValueError(f"offsets {sorted(offs)} do not define a tournament on Z_{n}")
    return rotational_digraph(n, offs)


def random_tournament(n: int, seed: int) -> Digraph:
    rng = random.Random(seed)
    edges = []
    for u, v in combinations(range(n), 2):
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph(n, tuple(edges))


def random_regular_digraph(n: int, r: int, seed: int, attempts: int = 32) -> Digraph:
    """Random r-regular simple digraph: prescribe degree r on a random supergraph.

    Above half degree the complement of a random (n-1-r)-regular digraph is
    returned instead, since near-complete supergraphs rarely admit degree r.
    """
    from .flow import DegreePrescription, Infeasible, degree_prescribed_subdigraph

    if not 0 <= r <= n - 1:
        raise ValueError(f"no {r}-regular loop-free digraph on {n} vertices")
    if r == n - 1:
        return complete_digraph(n)
    if 2 * r > n - 1:
        gone = random_regular_digraph(n, n - 1 - r, seed, attempts).adjacency
        return Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v and (u, v) not in gone))
    rng = random.Random(seed)
    p = (r + (n - 1)) / (2 * (n - 1))
    target = DegreePrescription(tuple([r] * n), tuple([r] * n))
    for _ in range(attempts):
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
        rng.shuffle(pairs)
        res = degree_prescribed_subdigraph(Digraph(n, tuple(pairs)), target, order=pairs)
        if not isinstance(res, Infeasible):
            return res
    raise ValueError(f"no {r}-regular subdigraph found in {attempts} random supergraphs")


def regular_tournaments(n: int) -> list[Digraph]:
    """All labeled regular tournaments on ``n`` (odd) vertices."""
    if n % 2 == 0:
        return []
    r = (n - 1) // 2
    pairs = list(combinations(range(n), 2))
    out_deg = [0] * n
    # remaining undecided pairs per vertex, to prune early
    remaining = [n - 1] * n
    chosen: list[Edge] = []
    found: list[Digraph] = []

    def place(k: int) -> None:
        if k == len(pairs):
            found.append(Digraph(n, tuple(chosen)))
            return
        u, v = pairs[k]
        remaining[u] -= 1
        remaining[v] -= 1
        for a, b in ((u, v), (v, u)):
            out_deg[a] += 1
            if out_deg[a] <= r and out_deg[b] + remaining[b] >= r and out_deg[a] + remaining[a] >= r:
                chosen.append((a, b))
                place(k + 1)
                chosen.pop()
            out_deg[a] -= 1
        remaining[u] += 1
        remaining[v] += 1

    place(0)
    return found


def isomorphism_classes(graphs: Sequence[Digraph]) -> list[Digraph]:
    """One representative per isomorphism class, first occurrence kept."""
    import networkx as nx

    reps: list[tuple[Digraph, object, tuple]] = []
    for g in graphs:
        h = nx.DiGraph(list(g.edges))
        h.add_nodes_from(range(g.n))
        key = tuple(sorted(zip(g.out_degrees, g.in_degrees)))
        wl = nx.weisfeiler_lehman_graph_hash(h)
        if not any(k == (key, wl) and nx.is_isomorphic(h, hr) for _, hr, k in reps):
            reps.append((g, h, (key, wl)))
    return [g for g, _, _ in reps]


GENERATORS = ("complete_digraph", "rotational_tournament", "random_tournament", "random_regular_digraph")


def generate(kind: str, params: dict, seed: int = 0) -> Digraph:
    if kind == "complete_digraph":
        return complete_digraph(params["n"])
    if kind == "rotational_tournament":
        return rotational_tournament(params["n"], params.get("offsets"))
    if kind == "random_tournament":
        return random_tournament(params["n"], seed)
    if kind == "random_regular_digraph":
        return random_regular_digraph(params["n"], params["r"], seed)
    raise ValueError(f"unknown generator kind {kind!r}; expected one of {GENERATORS}")
