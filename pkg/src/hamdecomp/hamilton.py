"""Hamilton-cycle search on digraphs.

Exact bitmask backtracking below ``exact_cap`` vertices; above it, a seeded
degree-guided backtracking with restarts under a node budget. Dead states
``(visited, last)`` are memoised; they stay valid across restarts because a
state is only marked dead after its subtree was fully explored.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .digraph import Digraph, OneFactor

EXACT_CAP = 12
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class NotFound:
    """Search gave up; says nothing about existence."""

    reason: str
    detail: object = None


@dataclass(frozen=True)
class NoneExists:
    """Search proved that no object of the requested kind exists."""

    reason: str
    detail: object = None


class _BudgetExceeded(Exception):
    pass


def _strongly_connected(n: int, out_masks: list[int], in_masks: list[int]) -> bool:
    if n == 0:
        return True
    full = (1 << n) - 1
    for masks in (out_masks, in_masks):
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= masks[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~seen
            seen |= nxt
        if seen != full:
            return False
    return True


def structural_obstruction(g: Digraph) -> str | None:
    """A cheap certificate that ``g`` has no Hamilton cycle, if one applies."""
    if g.n < 2:
        return "fewer than two vertices"
    if any(d == 0 for d in g.out_degrees) or any(d == 0 for d in g.in_degrees):
        return "vertex with zero in- or outdegree"
    out_masks = [sum(1 << v for v in g.out_neighbours[u]) for u in range(g.n)]
    in_masks = [sum(1 << u for u in g.in_neighbours[v]) for v in range(g.n)]
    if not _strongly_connected(g.n, out_masks, in_masks):
        return "not strongly connected"
    return None


def _search(g: Digraph, rng: random.Random | None, budget: int | None, dead: set) -> list[int] | None:
    n = g.n
    out_masks = [sum(1 << v for v in g.out_neighbours[u]) for u in range(n)]
    full = (1 << n) - 1
    start = 0
    closing = {u for u in range(n) if out_masks[u] >> start & 1}
    path = [start]
    nodes = [0]

    def rec(mask: int, last: int) -> bool:
        if mask == full:
            return last in closing
        if (mask, last) in dead:
            return False
        nodes[0] += 1
        if budget is not None and nodes[0] > budget:
            raise _BudgetExceeded
        cand = out_masks[last] & ~mask
        opts = []
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            onward = bin(out_masks[v] & ~mask & ~low).count("1")
            jitter = rng.random() if rng is not None else 0.0
            opts.append((onward, jitter, v))
        opts.sort()
        for _, _, v in opts:
            path.append(v)
            if rec(mask | (1 << v), v):
                return True
            path.pop()
        dead.add((mask, last))
        return False

    if rec(1 << start, start):
        return path
    return None


def find_hamilton(
    g: Digraph,
    budget: int | None = DEFAULT_BUDGET,
    seed: int = 0,
    exact_cap: int = EXACT_CAP,
    restarts: int = 8,
) -> OneFactor | NotFound | NoneExists:
    """Find a Hamilton cycle of ``g``.

    Returns the cycle as a :class:`OneFactor`, :class:`NoneExists` when the
    exact search (``n <= exact_cap``) or a structural obstruction rules one
    out, and :class:`NotFound` when the heuristic exhausts its budget.
    """
    why = structural_obstruction(g)
    if why is not None:
        return NoneExists(why)
    if g.n == 2:
        return OneFactor((1, 0))
    dead: set = set()
    if g.n <= exact_cap:
        path = _search(g, None, None, dead)
        if path is None:
            return NoneExists("exhaustive search")
        return OneFactor.from_cycle(path)
    rng = random.Random(seed)
    per_restart = None if budget is None else max(1, budget // max(1, restarts))
    for attempt in range(restarts):
        try:
            path = _search(g, rng if attempt else None, per_restart, dead)
        except _BudgetExceeded:
            continue
        if path is None:
            return NoneExists("search space exhausted")
        return OneFactor.from_cycle(path)
    return NotFound("budget exhausted", {"budget": budget, "restarts": restarts})


def hamilton_cycles_through(out_counts: list[list[int]], first: tuple[int, int]):
    """Yield every Hamilton cycle (as a vertex list from ``first[0]``) that
    uses the edge ``first``, in a count-matrix multidigraph."""
    n = len(out_counts)
    a, b = first
    full = (1 << n) - 1
    path = [a, b]

    def rec(mask: int, last: int):
        if mask == full:
            if out_counts[last][a] > 0:
                yield list(path)
            return
        row = out_counts[last]
        for v in range(n):
            if row[v] > 0 and not mask >> v & 1:
                path.append(v)
                yield from rec(mask | (1 << v), v)
                path.pop()

    if a == b or out_counts[a][b] <= 0:
        return
    if n == 2:
        if out_counts[b][a] > 0:
            yield [a, b]
        return
    yield from rec((1 << a) | (1 << b), b)
