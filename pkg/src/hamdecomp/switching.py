"""Exchanges between 1-factors and a local search that uses them to turn a
1-factorization into a Hamilton decomposition.

A C4-exchange between factors F and F' swaps the successors of two vertices
x, y in both factors at once. In each factor that changes the cycle count by
exactly one (split when x, y share a cycle, merge otherwise), so the total
count keeps its parity. A K23-exchange does the same swap in three factors at
once and therefore flips the parity.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .digraph import (
    Digraph,
    Edge,
    Factorization,
    HamiltonDecomposition,
    OneFactor,
    cycle_ids,
    verify_hamilton_decomposition,
)
from .hamilton import DEFAULT_BUDGET, NoneExists, NotFound, find_hamilton

__all__ = [
    "SwitchC4",
    "SwitchK23",
    "SwitchLog",
    "StuckReport",
    "find_c4_switch",
    "c4_switches",
    "apply_c4_exchange",
    "find_k23_switch",
    "apply_k23_exchange",
    "auxiliary_digraph",
    "merge_cycles_via_auxiliary",
    "alternating_cycles",
    "apply_alternating_exchange",
    "find_hamilton",
    "reduce_to_hamilton",
]


@dataclass(frozen=True)
class SwitchC4:
    """F holds x->x_succ and y->y_succ, F' holds x->y_succ and y->x_succ."""

    x: int
    x_succ: int
    y: int
    y_succ: int

    def __post_init__(self) -> None:
        if len({self.x, self.x_succ, self.y, self.y_succ}) != 4:
            raise ValueError("a C4 switch needs four distinct vertices")


@dataclass(frozen=True)
class SwitchK23:
    """Factor i holds x->a[i] and y->b[i]; afterwards it holds x->b[i] and y->a[i]."""

    x: int
    y: int
    a: tuple[int, int, int]
    b: tuple[int, int, int]

    def __post_init__(self) -> None:
        a, b = tuple(self.a), tuple(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != 3 or len(set(a)) != 3 or set(a) != set(b):
            raise ValueError("a and b must be orderings of the same three targets")
        if any(p == q for p, q in zip(a, b)):
            raise ValueError("each factor must receive a different target")
        if self.x == self.y or {self.x, self.y} & set(a):
            raise ValueError("sources must be distinct and outside the targets")

    @property
    def z(self) -> tuple[int, ...]:
        return tuple(sorted(self.a))


def c4_switches(F: OneFactor, F2: OneFactor) -> list[SwitchC4]:
    """Every C4 switch between F and F2, ordered by x (each listed once, x < y)."""
    out = []
    for x in range(F.n):
        y = F.pred[F2.succ[x]]
        if y > x and F2.succ[y] == F.succ[x]:
            out.append(SwitchC4(x, F.succ[x], y, F.succ[y]))
    return out


def find_c4_switch(F: OneFactor, F2: OneFactor, want: str = "any") -> SwitchC4 | None:
    """Lexicographically first switch of the requested kind.

    ``merge`` needs x and y on different cycles of F, ``split`` on the same.
    """
    if want not in ("any", "merge", "split"):
        raise ValueError(f"want must be any, merge or split, not {want!r}")
    cid, _ = cycle_ids(F.succ)
    for s in c4_switches(F, F2):
        same = cid[s.x] == cid[s.y]
        if want == "any" or (want == "split") == same:
            return s
    return None


def _swap(succ: Sequence[int], x: int, y: int) -> tuple[int, ...]:
    out = list(succ)
    out[x], out[y] = out[y], out[x]
    return tuple(out)


def apply_c4_exchange(F: OneFactor, F2: OneFactor, s: SwitchC4) -> tuple[OneFactor, OneFactor]:
    """Move x->x_succ, y->y_succ from F to F2 and x->y_succ, y->x_succ back.

    The same switch applied to the output moves the edges back, so the
    operation is an involution.
    """
    forward = F.succ[s.x] == s.x_succ and F.succ[s.y] == s.y_succ
    forward = forward and F2.succ[s.x] == s.y_succ and F2.succ[s.y] == s.x_succ
    backward = F.succ[s.x] == s.y_succ and F.succ[s.y] == s.x_succ
    backward = backward and F2.succ[s.x] == s.x_succ and F2.succ[s.y] == s.y_succ
    if not (forward or backward):
        raise ValueError(f"stale C4 switch {s}")
    return OneFactor(_swap(F.succ, s.x, s.y)), OneFactor(_swap(F2.succ, s.x, s.y))


def _k23_from(factors: Sequence[Sequence[int]], preds: Sequence[Sequence[int]], x: int):
    i, j, k = factors
    a = (i[x], j[x], k[x])
    if len(set(a)) < 3:
        return
    seen = set()
    for y in (preds[0][a[1]], preds[0][a[2]]):
        if y == x or y in seen or y in a:
            continue
        seen.add(y)
        b = (i[y], j[y], k[y])
        if x in b or set(b) != set(a) or any(p == q for p, q in zip(a, b)):
            continue
        yield SwitchK23(x, y, a, b)


def k23_switches(B1: OneFactor, B2: OneFactor, B3: OneFactor) -> list[SwitchK23]:
    """Every K23 switch of three factors, each listed once with x < y."""
    succs = (B1.succ, B2.succ, B3.succ)
    preds = (B1.pred, B2.pred, B3.pred)
    return [s for x in range(B1.n) for s in _k23_from(succs, preds, x) if s.x < s.y]


def find_k23_switch(
    B1: OneFactor, B2: OneFactor, B3: OneFactor, want: str = "any"
) -> SwitchK23 | None:
    """First K23 switch in increasing (x, y) order.

    ``merge`` requires x and y on different cycles in all three factors, so
    each factor loses a cycle; bicycles then become Hamilton cycles.
    """
    succs = (B1.succ, B2.succ, B3.succ)
    preds = (B1.pred, B2.pred, B3.pred)
    cids = [cycle_ids(s)[0] for s in succs] if want == "merge" else None
    best = None
    for x in range(B1.n):
        for s in _k23_from(succs, preds, x):
            if cids is not None and any(c[s.x] == c[s.y] for c in cids):
                continue
            if best is None or s.y < best.y:
                best = s
        if best is not None:
            return best
    return None


def apply_k23_exchange(
    B1: OneFactor, B2: OneFactor, B3: OneFactor, s: SwitchK23
) -> tuple[OneFactor, OneFactor, OneFactor]:
    out = []
    for B, a, b in zip((B1, B2, B3), s.a, s.b):
        if B.succ[s.x] != a or B.succ[s.y] != b:
            raise ValueError(f"stale K23 switch {s}")
        out.append(OneFactor(_swap(B.succ, s.x, s.y)))
    return out[0], out[1], out[2]


# merging cycles through an auxiliary digraph

def auxiliary_digraph(
    F: OneFactor, U1: Sequence[int], U2: Sequence[int], pool: Iterable[Edge]
) -> tuple[Digraph, list[int], dict[int, int]]:
    """Auxiliary digraph on U2 with u -> v whenever f(u) -> v is in the pool.

    f(u) is the first vertex of U1 met when walking along F from u. Returns
    the digraph on indices ``0..|U2|-1``, the U2 labels in index order, and f.
    """
    U1s, U2s = set(U1), set(U2)
    if len(U1s) != len(U2s) or U1s & U2s:
        raise ValueError("U1 and U2 must be disjoint sets of equal size")
    if {F.succ[u] for u in U1s} != U2s:
        raise ValueError("F does not match U1 onto U2")
    pool = set(pool)
    for a, b in pool:
        if a not in U1s or b not in U2s:
            raise ValueError(f"pool edge ({a}, {b}) does not run from U1 to U2")
    labels = sorted(U2s)
    index = {u: i for i, u in enumerate(labels)}
    f = {}
    for u in labels:
        v = u
        while v not in U1s:
            v = F.succ[v]
        f[u] = v
    edges = [(index[u], index[v]) for u in labels for v in labels if u != v and (f[u], v) in pool]
    return Digraph(len(labels), tuple(edges)), labels, f


def merge_cycles_via_auxiliary(
    F: OneFactor,
    U1: Sequence[int],
    U2: Sequence[int],
    pool: Iterable[Edge],
    budget: int | None = DEFAULT_BUDGET,
    seed: int = 0,
) -> OneFactor | NotFound:
    """Replace the U1->U2 matching of F by pool edges so that all of U1 and U2
    end up on one cycle; vertices that shared a cycle still do."""
    pool = set(pool)
    A, labels, f = auxiliary_digraph(F, U1, U2, pool)
    if A.n == 1:
        u = labels[0]
        return F if (f[u], u) in pool else NotFound("single matching edge not in pool")
    found = find_hamilton(A, budget=budget, seed=seed)
    if isinstance(found, (NotFound, NoneExists)):
        return NotFound("auxiliary digraph has no Hamilton cycle found", found)
    succ = list(F.succ)
    for i, u in enumerate(labels):
        succ[f[u]] = labels[found.succ[i]]
    return OneFactor(tuple(succ))


# alternating cycles: the general two-factor exchange

def alternating_cycles(F: OneFactor, F2: OneFactor) -> list[tuple[int, ...]]:
    """Source sets of the alternating cycles of F and F2.

    Starting at x, follow x -> F(x), then back along F2 to the vertex whose
    F2-successor is F(x), and repeat. Exchanging the successors of F and F2
    at every source of one such cycle leaves both factors permutations; a
    C4-exchange is the case of two sources. Cycles with one source (an edge
    present in both factors) are omitted.
    """
    seen = [False] * F.n
    out = []
    for x0 in range(F.n):
        if seen[x0]:
            continue
        comp = []
        x = x0
        while not seen[x]:
            seen[x] = True
            comp.append(x)
            x = F2.pred[F.succ[x]]
        if len(comp) > 1:
            out.append(tuple(comp))
    return out


def apply_alternating_exchange(
    F: OneFactor, F2: OneFactor, sources: Sequence[int]
) -> tuple[OneFactor, OneFactor]:
    src = set(sources)
    if {F.succ[x] for x in src} != {F2.succ[x] for x in src}:
        raise ValueError("sources do not form an alternating cycle")
    a, b = list(F.succ), list(F2.succ)
    for x in src:
        a[x], b[x] = b[x], a[x]
    return OneFactor(tuple(a)), OneFactor(tuple(b))


# reduction to a Hamilton decomposition

@dataclass
class SwitchLog:
    """Applied exchanges with the cycle counts of all factors before and after.

    ``c4`` and ``k23`` records swap the successors of x and y inside each
    listed factor; ``alt`` records swap successors between the two listed
    factors at every source.
    """

    records: list[dict] = field(default_factory=list)

    def add(self, kind: str, factors: Sequence[int], sources: Sequence[int], before: Sequence[int], after: Sequence[int]) -> None:
        self.records.append(
            {"kind": kind, "factors": list(factors), "sources": list(sources), "before": list(before), "after": list(after)}
        )

    def __len__(self) -> int:
        return len(self.records)

    def replay(self, f: Factorization) -> list[OneFactor]:
        succs = [list(F.succ) for F in f.factors]
        for rec in self.records:
            idx, src = rec["factors"], rec["sources"]
            if rec["kind"] in ("c4", "k23"):
                if len(idx) != {"c4": 2, "k23": 3}[rec["kind"]] or len(src) != 2:
                    raise ValueError(f"bad record {rec}")
                x, y = src
                for i in idx:
                    succs[i][x], succs[i][y] = succs[i][y], succs[i][x]
            elif rec["kind"] == "alt":
                i, j = idx
                for x in src:
                    succs[i][x], succs[j][x] = succs[j][x], succs[i][x]
            else:
                raise ValueError(f"unknown record kind {rec['kind']!r}")
        return [OneFactor(tuple(s)) for s in succs]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)

    @classmethod
    def from_jsonl(cls, text: str) -> "SwitchLog":
        return cls([json.loads(line) for line in text.splitlines() if line.strip()])


@dataclass(frozen=True)
class StuckReport:
    cycle_counts: tuple[int, ...]
    target: int
    steps: int
    reason: str

    @property
    def total(self) -> int:
        return sum(self.cycle_counts)

    @property
    def parity_ok(self) -> bool:
        return (self.total - self.target) % 2 == 0

    def to_record(self) -> dict:
        return {
            "cycle_counts": list(self.cycle_counts),
            "target": self.target,
            "steps": self.steps,
            "parity_ok": self.parity_ok,
            "reason": self.reason,
        }


EXHAUSTIVE_PAIR_CYCLES = 14


class _State:
    def __init__(self, factors: Sequence[OneFactor]) -> None:
        self.succ = [list(F.succ) for F in factors]
        self.pred = [list(F.pred) for F in factors]
        self.cid = []
        self.count = []
        for s in self.succ:
            c, k = cycle_ids(s)
            self.cid.append(c)
            self.count.append(k)

    def _refresh(self, i: int) -> None:
        s, p = self.succ[i], self.pred[i]
        for v, w in enumerate(s):
            p[w] = v
        self.cid[i], self.count[i] = cycle_ids(s)

    def apply(self, kind: str, idx: Sequence[int], src: Sequence[int]) -> None:
        if kind == "alt":
            i, j = idx
            si, sj = self.succ[i], self.succ[j]
            for x in src:
                si[x], sj[x] = sj[x], si[x]
        else:
            x, y = src
            for i in idx:
                s = self.succ[i]
                s[x], s[y] = s[y], s[x]
        for i in idx:
            self._refresh(i)

    def pair_moves(self):
        """(kind, factors, sources, count deltas) for every alternating cycle."""
        r = len(self.succ)
        for i in range(r):
            si, pi = self.succ[i], self.pred[i]
            for j in range(i + 1, r):
                sj, pj = self.succ[j], self.pred[j]
                seen = [False] * len(si)
                for x0 in range(len(si)):
                    if seen[x0]:
                        continue
                    comp = []
                    x = x0
                    while not seen[x]:
                        seen[x] = True
                        comp.append(x)
                        x = pj[si[x]]
                    if len(comp) == 1:
                        continue
                    if len(comp) == 2:
                        a, b = comp
                        di = 1 if self.cid[i][a] == self.cid[i][b] else -1
                        dj = 1 if self.cid[j][a] == self.cid[j][b] else -1
                        yield "c4", (i, j), tuple(comp), (di, dj)
                        continue
                    ni, nj = list(si), list(sj)
                    for v in comp:
                        ni[v], nj[v] = sj[v], si[v]
                    di = cycle_ids(ni)[1] - self.count[i]
                    dj = cycle_ids(nj)[1] - self.count[j]
                    yield "alt", (i, j), tuple(comp), (di, dj)

    def k23_moves(self):
        r = len(self.succ)
        for i in range(r):
            for j in range(i + 1, r):
                for k in range(j + 1, r):
                    trip = (self.succ[i], self.succ[j], self.succ[k])
                    preds = (self.pred[i], self.pred[j], self.pred[k])
                    for x in range(len(trip[0])):
                        for s in _k23_from(trip, preds, x):
                            if s.y < s.x:
                                continue  # the mirrored switch swaps the same pair
                            deltas = tuple(
                                1 if self.cid[t][s.x] == self.cid[t][s.y] else -1 for t in (i, j, k)
                            )
                            yield "k23", (i, j, k), (s.x, s.y), deltas


def _potential(total: int, r: int) -> int:
    excess = total - r
    return excess + 2 * (excess % 2)


def _two_factor_search(st: _State, log: SwitchLog | None) -> bool:
    """Try every way of re-splitting two factors; True when both became Hamilton."""
    comps = alternating_cycles(OneFactor(tuple(st.succ[0])), OneFactor(tuple(st.succ[1])))
    if len(comps) > EXHAUSTIVE_PAIR_CYCLES:
        return False
    base0, base1 = st.succ[0], st.succ[1]
    for mask in range(1 << len(comps)):
        a, b = list(base0), list(base1)
        for t, comp in enumerate(comps):
            if mask >> t & 1:
                for x in comp:
                    a[x], b[x] = b[x], a[x]
        if cycle_ids(a)[1] == 1 and cycle_ids(b)[1] == 1:
            for t, comp in enumerate(comps):
                if mask >> t & 1:
                    before = tuple(st.count)
                    st.apply("alt", (0, 1), comp)
                    if log is not None:
                        log.add("alt", (0, 1), comp, before, st.count)
            return True
    return False


def reduce_to_hamilton(
    f: Factorization,
    budget: int | None = None,
    seed: int = 0,
    log: SwitchLog | None = None,
    tabu_tenure: int = 7,
) -> HamiltonDecomposition | StuckReport:
    """Local search over factor exchanges until every factor is a Hamilton cycle.

    Moves are alternating-cycle exchanges between two factors (C4-exchanges
    being the shortest) and K23-exchanges between three, the only moves that
    change the parity of the total cycle count. Each step takes the move with
    the best change in potential ``(total cycles - r) + 2 * [that excess is odd]``.
    On a plateau, merges in the factor with the most cycles and moves leaving
    the partner with at most two cycles are preferred; recent moves are tabu
    and a random worsening move is taken when nothing else is left. With two
    factors every re-split is tried outright. ``budget`` counts steps
    (default ``n*n``); applied exchanges are appended to ``log``.
    """
    r = f.r
    n = f.host.n
    if budget is None:
        budget = max(1, n * n)
    rng = random.Random(seed)
    st = _State(f.factors)
    tabu: deque = deque(maxlen=tabu_tenure)
    steps = 0
    if r == 2 and sum(st.count) > 2:
        if not _two_factor_search(st, log):
            comps = len(alternating_cycles(*f.factors))
            if comps <= EXHAUSTIVE_PAIR_CYCLES:
                return StuckReport(tuple(st.count), r, 0, "no re-split of the two factors is Hamilton")
    while True:
        total = sum(st.count)
        if total == r:
            d = HamiltonDecomposition(tuple(OneFactor(tuple(s)) for s in st.succ))
            assert verify_hamilton_decomposition(f.host, d).ok
            return d
        if steps >= budget:
            return StuckReport(tuple(st.count), r, steps, "step budget exhausted")
        if r < 2:
            return StuckReport(tuple(st.count), r, steps, "no exchanges possible with fewer than two factors")
        steps += 1
        here = _potential(total, r)
        most = max(st.count)
        moves = list(st.pair_moves())
        if r >= 3:
            moves += list(st.k23_moves())
        if not moves:
            return StuckReport(tuple(st.count), r, steps, "no exchange available")
        candidates = []
        for kind, idx, src, deltas in moves:
            gain = _potential(total + sum(deltas), r) - here
            productive = any(d < 0 and st.count[i] == most for i, d in zip(idx, deltas)) or all(
                st.count[i] + d <= 2 for i, d in zip(idx, deltas) if d > 0
            )
            key = (idx, min(src))
            candidates.append((gain, key in tabu, not productive, rng.random(), (kind, idx, src)))
        improving = [c for c in candidates if c[0] < 0]
        if improving:
            choice = min(improving)
        else:
            choice = min(candidates, key=lambda c: (c[1], c[0] > 0, c[2], c[3]))
            if choice[0] > 0 and rng.random() < 0.5:
                choice = rng.choice(candidates)
        kind, idx, src = choice[4]
        before = tuple(st.count)
        st.apply(kind, idx, src)
        tabu.append((idx, min(src)))
        if log is not None:
            log.add(kind, idx, src, before, st.count)
