"""Shifted walks, chord sequences and universal walks around a Hamilton cycle C.

A shifted walk from A to B runs ``V1 C V1- V2 C V2- ... Vt C Vt- V(t+1)``:
from each position it goes once round C and then jumps along a chord
``Vi- -> V(i+1)``. Only the chords are kept in a chord sequence.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .digraph import Digraph, Edge, VerifyReport
from .expander import as_fraction
from .flow import one_factorization
from .hamilton import NotFound


@dataclass(frozen=True)
class CycleOrder:
    order: tuple[int, ...]

    def __post_init__(self) -> None:
        order = tuple(self.order)
        if len(set(order)) != len(order) or len(order) < 2:
            raise ValueError("cycle order must list at least two distinct vertices")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_pos", {v: i for i, v in enumerate(order)})

    @classmethod
    def on(cls, R: Digraph, order: Sequence[int]) -> "CycleOrder":
        c = cls(tuple(order))
        if sorted(c.order) != list(range(R.n)):
            raise ValueError("cycle order does not span the digraph")
        for u, v in c.edges:
            if not R.has_edge(u, v):
                raise ValueError(f"cycle edge ({u}, {v}) missing from the digraph")
        return c

    def __len__(self) -> int:
        return len(self.order)

    def succ(self, v: int) -> int:
        return self.order[(self._pos[v] + 1) % len(self.order)]

    def pred(self, v: int) -> int:
        return self.order[self._pos[v] - 1]

    @property
    def edges(self) -> list[Edge]:
        return [(v, self.succ(v)) for v in self.order]

    def is_cycle_edge(self, u: int, v: int) -> bool:
        return u in self._pos and self.succ(u) == v

    def path(self, start: int) -> list[int]:
        """``start C start-``: all of C beginning at ``start``."""
        i = self._pos[start]
        return [self.order[(i + j) % len(self.order)] for j in range(len(self.order))]


@dataclass(frozen=True)
class ChordSequence:
    src: int
    dst: int
    edges: tuple[Edge, ...]
    positions: tuple[int, ...]

    @property
    def interior(self) -> tuple[int, ...]:
        """V2, V2-, ..., Vt, Vt- as a multiset (entries and exits by chords)."""
        return tuple(self.positions[1:-1])

    def __len__(self) -> int:
        return len(self.edges)


def _sequence_from_positions(C: CycleOrder, positions: list[int]) -> ChordSequence:
    edges = tuple((C.pred(positions[i]), positions[i + 1]) for i in range(len(positions) - 1))
    interior = []
    for p in positions[1:-1]:
        interior += [p, C.pred(p)]
    return ChordSequence(positions[0], positions[-1], edges, (positions[0], *interior, positions[-1]))


def max_chord_edges(nu) -> int:
    return math.ceil(3 / as_fraction(nu))


def chord_sequence(
    R: Digraph,
    C: CycleOrder,
    A: int,
    B: int,
    forbidden: Iterable[int] = (),
    nu=None,
    max_edges: int | None = None,
) -> ChordSequence | NotFound:
    """Shortest chord sequence CS(A, B) whose interior avoids ``forbidden``.

    Layer i holds the positions reachable by a shifted walk that uses i chords:
    layer 1 is the outneighbourhood of A-, and layer i is
    ``N+(N-_C(layer i-1))`` restricted to positions that are neither forbidden
    nor successors of forbidden vertices. Positions are scanned in increasing
    order, so the lowest-index first chord target is preferred. The search
    stops at ``max_edges`` chords (``ceil(3/nu)`` when ``nu`` is given).
    """
    forbidden = set(forbidden)
    k = R.n
    if nu is not None:
        nu = as_fraction(nu)
        if len(forbidden) > nu * k / 4:
            warnings.warn(
                f"{len(forbidden)} forbidden vertices exceed nu*|R|/4 = {float(nu * k / 4):.3g}",
                stacklevel=2,
            )
        if max_edges is None:
            max_edges = max_chord_edges(nu)
    if max_edges is None:
        max_edges = k
    if A == B:
        return ChordSequence(A, B, (), (A, B))
    blocked = forbidden | {C.succ(v) for v in forbidden}
    parent: dict[int, int | None] = {A: None}
    frontier = [A]
    for _ in range(max_edges):
        for X in frontier:
            if B in R.out_neighbours[C.pred(X)] and B != X:
                positions = [B, X]
                while parent[positions[-1]] is not None:
                    positions.append(parent[positions[-1]])
                return _sequence_from_positions(C, positions[::-1])
        nxt = []
        for X in frontier:
            for Y in R.out_neighbours[C.pred(X)]:
                if Y != X and Y not in parent and Y not in blocked:
                    parent[Y] = X
                    nxt.append(Y)
        frontier = sorted(nxt)
        if not frontier:
            return NotFound("expansion stalled", sorted(parent))
    return NotFound("length bound reached", {"max_edges": max_edges, "frontier": frontier})


def shifted_walk(
    R: Digraph, C: CycleOrder, A: int, B: int, nu=None, forbidden: Iterable[int] = (), max_edges: int | None = None
) -> list[int] | NotFound:
    cs = chord_sequence(R, C, A, B, forbidden, nu, max_edges)
    if isinstance(cs, NotFound):
        return cs
    return expand_chord_sequence(C, cs)


def expand_chord_sequence(C: CycleOrder, cs: ChordSequence) -> list[int]:
    walk: list[int] = []
    pos = cs.src
    for _, head in cs.edges:
        walk += C.path(pos)
        pos = head
    walk.append(pos)
    return walk


def chord_edges_of_walk(C: CycleOrder, walk: Sequence[int]) -> list[Edge]:
    return [(a, b) for a, b in zip(walk, walk[1:]) if not C.is_cycle_edge(a, b)]


def chain_law_violation(C: CycleOrder, cs: ChordSequence) -> str | None:
    """None if ``cs`` is a well-formed chord sequence from src to dst."""
    if not cs.edges:
        return None if cs.src == cs.dst else "empty sequence between distinct vertices"
    if cs.edges[0][0] != C.pred(cs.src):
        return "first chord does not leave the predecessor of the source"
    if cs.edges[-1][1] != cs.dst:
        return "last chord does not enter the destination"
    for (_, w), (u, _) in zip(cs.edges, cs.edges[1:]):
        if u != C.pred(w):
            return f"chord leaving {u} does not follow a chord into {w}"
    for u, v in cs.edges:
        if C.is_cycle_edge(u, v):
            return f"cycle edge ({u}, {v}) used as a chord"
    return None


def verify_local_balance(C: CycleOrder, edges: Iterable[Edge]) -> bool:
    """For every edge UW of C: edges leaving U == edges entering W."""
    out_count: Counter = Counter()
    in_count: Counter = Counter()
    for u, v in edges:
        out_count[u] += 1
        in_count[v] += 1
    return all(out_count[u] == in_count[w] for u, w in C.edges)


@dataclass(frozen=True)
class UniversalWalk:
    edges: tuple[Edge, ...]
    ell: int
    ecs: tuple[ChordSequence, ...]
    assignment: tuple[int | None, ...]

    @property
    def roles(self) -> tuple[str, ...]:
        return tuple("cyclic" if a is None else "chord" for a in self.assignment)

    def to_record(self) -> dict:
        return {
            "ell": self.ell,
            "edges": [[u, v, role] for (u, v), role in zip(self.edges, self.roles)],
            "ecs": [[list(e) for e in cs.edges] for cs in self.ecs],
        }


def default_ell(nu) -> int:
    return math.ceil(36 / as_fraction(nu) ** 2)


def _ecs_limit(ell: int) -> int:
    # largest m with m <= sqrt(ell)/2
    return math.isqrt(ell // 4)


def universal_walk(R: Digraph, C: CycleOrder, ell: int) -> UniversalWalk | NotFound:
    """Closed walk holding one elementary chord sequence per edge of C and
    entering and leaving every vertex exactly ``ell`` times.

    Elementary sequences are chosen greedily, avoiding vertices whose
    interiors were already visited ``2*ell/3`` times. C-edges are then padded
    so the multidigraph is ``(ell-1)``-regular, and one extra copy of C joins
    the cycles of a 1-factorization into a single walk.
    """
    if ell < 4:
        raise ValueError("ell must be at least 4")
    k = len(C)
    limit = _ecs_limit(ell)
    full_at = Fraction(2 * ell, 3)
    visits: Counter = Counter()
    ecs: list[ChordSequence] = []
    for A in C.order:
        B = C.succ(A)
        full = {v for v in C.order if visits[v] >= full_at}
        cs = chord_sequence(R, C, A, B, full, max_edges=limit)
        if isinstance(cs, NotFound):
            return NotFound(f"no elementary chord sequence from {A} to {B}", cs.detail)
        visits.update(cs.interior)
        ecs.append(cs)
    n_out: Counter = Counter()
    n_in: Counter = Counter()
    chord_edges = [e for cs in ecs for e in cs.edges]
    for u, v in chord_edges:
        n_out[u] += 1
        n_in[v] += 1
    assert all(n_out[u] == n_in[w] for u, w in C.edges)
    padded = list(chord_edges)
    for u, w in C.edges:
        extra = ell - 1 - n_in[w]
        if extra < 0:
            return NotFound(f"vertex {w} entered {n_in[w]} times by chords, above ell-1")
        padded += [(u, w)] * extra
    factors = one_factorization(Digraph(k, tuple(padded), multi=True)).factors
    done = [[False] * k for _ in factors]
    walk: list[Edge] = []
    for v in C.order:
        for fi, f in enumerate(factors):
            if done[fi][v]:
                continue
            x = v
            while True:
                done[fi][x] = True
                walk.append((x, f.succ[x]))
                x = f.succ[x]
                if x == v:
                    break
        walk.append((v, C.succ(v)))
    slots: dict[Edge, deque] = defaultdict(deque)
    for i, cs in enumerate(ecs):
        for e in cs.edges:
            slots[e].append(i)
    assignment = tuple(slots[e].popleft() if not C.is_cycle_edge(*e) else None for e in walk)
    return UniversalWalk(tuple(walk), ell, tuple(ecs), assignment)


def verify_universal_walk(R: Digraph, C: CycleOrder, U: UniversalWalk) -> VerifyReport:
    """Check closedness, (U1) chord bookkeeping, (U2) ECS length, (U3) ell visits."""
    k = len(C)
    if not U.edges:
        return VerifyReport(False, "empty walk")
    for u, v in U.edges:
        if not R.has_edge(u, v):
            return VerifyReport(False, "edge not in R", (u, v))
    for (_, b), (c, _) in zip(U.edges, U.edges[1:] + U.edges[:1]):
        if b != c:
            return VerifyReport(False, "walk is not closed and connected", (b, c))
    if len(U.ecs) != k:
        return VerifyReport(False, "wrong number of elementary chord sequences", len(U.ecs))
    for i, (cs, A) in enumerate(zip(U.ecs, C.order)):
        if cs.src != A or cs.dst != C.succ(A):
            return VerifyReport(False, "ECS endpoints", i)
        bad = chain_law_violation(C, cs)
        if bad:
            return VerifyReport(False, f"ECS {i}: {bad}", i)
        if 4 * len(cs) ** 2 > U.ell:
            return VerifyReport(False, "ECS longer than sqrt(ell)/2", i)
    chords_in_walk = Counter(e for e in U.edges if not C.is_cycle_edge(*e))
    chords_in_ecs = Counter(e for cs in U.ecs for e in cs.edges)
    if chords_in_walk != chords_in_ecs:
        return VerifyReport(False, "chord edges of walk differ from ECS union")
    outs = Counter(u for u, _ in U.edges)
    ins = Counter(v for _, v in U.edges)
    for v in C.order:
        if outs[v] != U.ell or ins[v] != U.ell:
            return VerifyReport(False, "vertex not entered/left exactly ell times", v)
    return VerifyReport(True)
