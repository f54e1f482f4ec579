"""End-to-end pipelines: decomposition of regular digraphs, an exact oracle
for small instances, complete digraphs, ATSP tours and random tournaments."""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .digraph import (
    Digraph,
    HamiltonDecomposition,
    OneFactor,
    complete_digraph,
    random_tournament,
    validate,
    verify_hamilton_decomposition,
)
from .expander import EXHAUSTIVE_CAP, ExpanderCertificate, ExpanderParams, certify
from .flow import Infeasible, one_factorization, regular_spanning_subdigraph
from .hamilton import NotFound, _strongly_connected, hamilton_cycles_through
from .switching import StuckReport, SwitchLog, reduce_to_hamilton

EXACT_DECOMPOSE_CAP = 10


@dataclass(frozen=True)
class ProvedNone:
    """An exhaustive search finished without finding a decomposition."""

    reason: str = "exhaustive search"


class NotRegular(ValueError):
    def __init__(self, table: list[tuple[int, int, int]]) -> None:
        self.table = table
        super().__init__("digraph is not regular; (vertex, out, in) = " + ", ".join(map(str, table)))


class CapRefused(ValueError):
    pass


@dataclass(frozen=True)
class DecomposeConfig:
    restarts: int = 64
    steps: int | None = None  # per restart; n*n when None
    exact_cap: int = EXACT_DECOMPOSE_CAP
    certify: bool = False
    params: ExpanderParams | None = None
    mode: str = "exhaustive"
    certify_cap: int = EXHAUSTIVE_CAP
    seed: int = 0
    jobs: int = 1


@dataclass
class DecompositionReport:
    verdict: str  # success | failure | proved-impossible
    decomposition: HamiltonDecomposition | None = None
    certificate: ExpanderCertificate | None = None
    stats: dict = field(default_factory=dict)

    def to_record(self, timing: bool = False) -> dict:
        stats = dict(self.stats)
        if not timing:
            stats.pop("runtime", None)
        rec = {
            "verdict": self.verdict,
            "cycles": self.decomposition.as_lists() if self.decomposition else [],
            "stats": stats,
        }
        if self.certificate is not None:
            rec["certificate"] = self.certificate.to_record()
        return rec


# exact oracle

def _counts_connected(counts: list[list[int]]) -> bool:
    n = len(counts)
    out_masks = [sum(1 << v for v in range(n) if counts[u][v]) for u in range(n)]
    in_masks = [sum(1 << u for u in range(n) if counts[u][v]) for v in range(n)]
    return _strongly_connected(n, out_masks, in_masks)


def exact_decompose(g: Digraph, cap: int = EXACT_DECOMPOSE_CAP) -> HamiltonDecomposition | ProvedNone:
    """Exhaustive search for a Hamilton decomposition.

    The cycle through the lowest remaining edge at vertex 0 is branched on,
    so no decomposition is visited twice in a different order. Remainders
    that are not strongly connected are cut, and failed remainders are
    memoised.
    """
    if g.n > cap:
        raise CapRefused(f"exact decomposition capped at {cap} vertices, graph has {g.n}")
    r = g.regularity()
    if r is None:
        raise NotRegular(validate(g).degree_table)
    n = g.n
    if r == 0:
        return HamiltonDecomposition(())
    if n < 2:
        return ProvedNone("fewer than two vertices")
    counts = [[0] * n for _ in range(n)]
    for (u, v), c in g.multiplicity.items():
        counts[u][v] = c
    failed: set = set()

    def solve(left: int) -> list[list[int]] | None:
        if left == 0:
            return []
        key = tuple(tuple(row) for row in counts)
        if key in failed:
            return None
        if not _counts_connected(counts):
            failed.add(key)
            return None
        first = (0, next(v for v in range(n) if counts[0][v]))
        for cyc in hamilton_cycles_through(counts, first):
            edges = list(zip(cyc, cyc[1:] + cyc[:1]))
            for u, v in edges:
                counts[u][v] -= 1
            rest = solve(left - 1)
            for u, v in edges:
                counts[u][v] += 1
            if rest is not None:
                return [cyc] + rest
        failed.add(key)
        return None

    found = solve(r)
    if found is None:
        return ProvedNone()
    return HamiltonDecomposition.from_lists(found)


# switching pipeline

def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for v, p in enumerate(perm):
        inv[p] = v
    return inv


def _attempt(g: Digraph, k: int, steps: int, seed: int) -> tuple[int, HamiltonDecomposition | None, int]:
    """Restart ``k``: factorize a relabelled copy (none for k = 0) and switch."""
    n = g.n
    perm = list(range(n))
    if k:
        perm = random.Random(f"{seed}:{k}").sample(range(n), n)
    h = g.relabel(perm) if k else g
    log = SwitchLog()
    res = reduce_to_hamilton(one_factorization(h), steps, seed + k, log)
    if isinstance(res, StuckReport):
        return k, None, len(log)
    inv = _inverse(perm)
    cycles = tuple(OneFactor(tuple(inv[c.succ[perm[u]]] for u in range(n))) for c in res.cycles)
    return k, HamiltonDecomposition(cycles), len(log)


def _attempt_star(args):
    return _attempt(*args)


def _run_restarts(g: Digraph, config: DecomposeConfig, steps: int) -> tuple[HamiltonDecomposition | None, int, int]:
    switches = 0
    tried = 0
    if config.jobs <= 1:
        for k in range(config.restarts):
            _, d, sw = _attempt(g, k, steps, config.seed)
            tried += 1
            switches += sw
            if d is not None:
                return d, tried, switches
        return None, tried, switches
    with ProcessPoolExecutor(config.jobs) as pool:
        for start in range(0, config.restarts, config.jobs):
            batch = [(g, k, steps, config.seed) for k in range(start, min(config.restarts, start + config.jobs))]
            results = sorted(pool.map(_attempt_star, batch), key=lambda t: t[0])
            for k, d, sw in results:
                tried += 1
                switches += sw
                if d is not None:
                    return d, tried, switches
    return None, tried, switches


def decompose(g: Digraph, config: DecomposeConfig | None = None) -> DecompositionReport:
    """Certify (optionally), 1-factorize, switch towards Hamilton cycles with
    restarts, and fall back to the exact oracle on small inputs."""
    config = config or DecomposeConfig()
    t0 = time.perf_counter()
    r = g.regularity()
    if r is None:
        raise NotRegular(validate(g).degree_table)
    n = g.n
    steps = config.steps if config.steps is not None else max(1, n * n)
    cert = None
    if config.certify:
        cert = certify(g, config.params, config.mode, cap=config.certify_cap)
    stats = {"n": n, "r": r, "restart_budget": config.restarts, "steps_per_restart": steps}
    d, tried, switches = _run_restarts(g, config, steps)
    stats.update(restarts=tried, switches=switches, method="switching")
    verdict = "failure"
    if d is None and n <= config.exact_cap:
        exact = exact_decompose(g, config.exact_cap)
        stats["method"] = "exact"
        if isinstance(exact, ProvedNone):
            verdict = "proved-impossible"
        else:
            d = exact
    if d is not None:
        if not verify_hamilton_decomposition(g, d).ok:
            raise AssertionError("decomposition failed verification")
        verdict = "success"
    stats["runtime"] = round(time.perf_counter() - t0, 6)
    return DecompositionReport(verdict, d, cert, stats)


# complete digraphs

def tillson_decompose(n: int, config: DecomposeConfig | None = None) -> HamiltonDecomposition | ProvedNone | NotFound:
    """Hamilton decomposition of the complete digraph on n vertices."""
    if n < 3:
        raise ValueError("need n >= 3")
    report = decompose(complete_digraph(n), config)
    if report.verdict == "success":
        return report.decomposition
    if report.verdict == "proved-impossible":
        return ProvedNone()
    return NotFound("switching budget exhausted", report.stats)


@lru_cache(maxsize=None)
def _complete_cycles(n: int) -> tuple[tuple[int, ...], ...] | None:
    d = tillson_decompose(n)
    if not isinstance(d, HamiltonDecomposition):
        return None
    return tuple(tuple(c) for c in d.as_lists())


# ATSP

@dataclass(frozen=True)
class WeightMatrix:
    n: int
    w: tuple[tuple[Fraction | None, ...], ...]

    def __post_init__(self) -> None:
        w = tuple(tuple(None if i == j else Fraction(x) for j, x in enumerate(row)) for i, row in enumerate(self.w))
        if len(w) != self.n or any(len(row) != self.n for row in w):
            raise ValueError(f"weight matrix must be {self.n}x{self.n}")
        if any(x is not None and x < 0 for row in w for x in row):
            raise ValueError("weights must be non-negative")
        object.__setattr__(self, "w", w)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "WeightMatrix":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    @classmethod
    def random(cls, n: int, seed: int, high: int = 100) -> "WeightMatrix":
        rng = random.Random(seed)
        return cls(n, tuple(tuple(None if i == j else Fraction(rng.randint(0, high)) for j in range(n)) for i in range(n)))

    def total(self) -> Fraction:
        return sum((x for row in self.w for x in row if x is not None), Fraction(0))

    def tour_weight(self, tour: Sequence[int]) -> Fraction:
        return sum((self.w[a][b] for a, b in zip(tour, list(tour[1:]) + [tour[0]])), Fraction(0))


@dataclass
class AtspResult:
    tour: list[int]
    weight: Fraction
    mean: Fraction
    bound_check: bool
    route: str  # decomposition | sampled
    domination_count: int | None = None
    tours_total: int | None = None
    at_least_mean: int | None = None

    def to_record(self) -> dict:
        rec = {
            "tour": self.tour,
            "weight": str(self.weight),
            "mean": str(self.mean),
            "bound_check": self.bound_check,
            "route": self.route,
        }
        if self.domination_count is not None:
            rec.update(
                domination_count=self.domination_count,
                tours_total=self.tours_total,
                domination_fraction=str(Fraction(self.domination_count, self.tours_total)),
                tours_at_least_mean=self.at_least_mean,
            )
        return rec


def all_tours(n: int) -> Iterator[list[int]]:
    """Every directed Hamilton cycle of the complete digraph, starting at 0."""
    for rest in itertools.permutations(range(1, n)):
        yield [0, *rest]


def atsp_domination_tour(w: WeightMatrix, seed: int = 0, brute_force: bool | None = None) -> AtspResult:
    """Lightest cycle of a Hamilton decomposition of the complete digraph.

    Its weight is at most the mean tour weight, total/(n-1). Where no
    decomposition exists (n = 4, 6) the lightest of the enumerated tours is
    returned instead, labelled ``sampled``. ``brute_force`` (default: n <= 8)
    counts tours that are no lighter than the result.
    """
    n = w.n
    if n < 3:
        raise ValueError("need n >= 3")
    mean = w.total() / (n - 1)
    cycles = _complete_cycles(n)
    if cycles is None:
        route = "sampled"
        candidates = list(all_tours(n)) if n <= 8 else None
        if candidates is None:
            rng = random.Random(seed)
            candidates = [[0, *rng.sample(range(1, n), n - 1)] for _ in range(10_000)]
    else:
        route = "decomposition"
        perm = random.Random(seed).sample(range(n), n)
        candidates = [[perm[v] for v in c] for c in cycles]
    tour = min(candidates, key=lambda t: (w.tour_weight(t), t))
    weight = w.tour_weight(tour)
    res = AtspResult(tour, weight, mean, weight <= mean, route)
    if brute_force is None:
        brute_force = n <= 8
    if brute_force:
        weights = [w.tour_weight(t) for t in all_tours(n)]
        res.domination_count = sum(1 for x in weights if x >= weight)
        res.tours_total = len(weights)
        res.at_least_mean = sum(1 for x in weights if x >= mean)
    return res


# random tournaments

@dataclass(frozen=True)
class TournamentConfig:
    extractions: int = 8
    restarts: int = 16
    steps: int | None = None


def _edge_disjoint_hamilton_in(g: Digraph, cycles: Sequence[Sequence[int]]) -> bool:
    used = set()
    for c in cycles:
        if sorted(c) != list(range(g.n)):
            return False
        for e in zip(c, list(c[1:]) + [c[0]]):
            if e in used or not g.has_edge(*e):
                return False
            used.add(e)
    return True


def decompose_tournament(g: Digraph, seed: int, config: TournamentConfig | None = None) -> dict:
    """Extract a delta0-regular spanning subdigraph of ``g`` and decompose it.

    A failed decomposition retries the extraction with the arcs offered to
    the flow in a shuffled order, so a different subdigraph comes out.
    """
    config = config or TournamentConfig()
    d0 = g.min_semidegree()
    rec = {"n": g.n, "delta0": d0, "extracted": False, "decomposed": False}
    rng = random.Random(seed)
    arcs = sorted(g.adjacency)
    for attempt in range(config.extractions):
        order = None
        if attempt:
            order = arcs[:]
            rng.shuffle(order)
        h = regular_spanning_subdigraph(g, d0, order)
        if isinstance(h, Infeasible):
            continue
        rec["extracted"] = True
        rep = decompose(h, DecomposeConfig(restarts=config.restarts, steps=config.steps, seed=seed + attempt))
        rec["extraction_attempts"] = attempt + 1
        if rep.verdict == "success":
            cycles = rep.decomposition.as_lists()
            rec["decomposed"] = len(cycles) == d0 and _edge_disjoint_hamilton_in(g, cycles)
            rec["method"] = rep.stats["method"]
            if rec["decomposed"]:
                rec["cycles"] = cycles
                return rec
    return rec


def tournament_trial(n: int, trial: int, seed: int, config: TournamentConfig | None = None) -> dict:
    trial_seed = random.Random(f"{seed}:{trial}").getrandbits(32)
    rec = decompose_tournament(random_tournament(n, trial_seed), trial_seed, config)
    rec.pop("cycles", None)
    return {"trial": trial, "seed": trial_seed, **rec}


def _trial_star(args):
    return tournament_trial(*args)


def tournament_experiment(
    n: int, trials: int, seed: int, jobs: int = 1, config: TournamentConfig | None = None
) -> Iterator[dict]:
    """Per-trial records in trial order: delta0, extracted, decomposed."""
    if n < 3:
        raise ValueError("need n >= 3")
    args = [(n, t, seed, config) for t in range(trials)]
    if jobs <= 1:
        for a in args:
            yield tournament_trial(*a)
        return
    with ProcessPoolExecutor(jobs) as pool:
        yield from pool.map(_trial_star, args)


def summarize(records: Sequence[dict]) -> dict:
    total = len(records)
    ok = sum(1 for r in records if r["decomposed"])
    return {
        "summary": True,
        "trials": total,
        "extracted": sum(1 for r in records if r["extracted"]),
        "decomposed": ok,
        "success_rate": round(ok / total, 6) if total else None,
        "failed_trials": [r["trial"] for r in records if not r["decomposed"]],
    }


def domination_fraction(res: AtspResult) -> Fraction | None:
    if res.domination_count is None:
        return None
    return Fraction(res.domination_count, res.tours_total)

