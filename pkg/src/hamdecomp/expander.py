"""Robust outneighbourhoods and robust (nu, tau)-outexpansion.

All thresholds are exact rationals. A vertex is in the nu-robust
outneighbourhood of S when it has at least ``ceil(nu * n)`` inneighbours in S,
and expansion asks ``|RN(S)| >= |S| + nu * n`` for every S whose size lies in
``[tau * n, (1 - tau) * n]``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .digraph import Digraph, validate

EXHAUSTIVE_CAP = 18
MAX_REPORTED_VIOLATIONS = 100
_CHUNK = 1 << 16


class CapExceeded(ValueError):
    """Exhaustive certification was requested above the configured cap."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # floats go through their shortest repr so 0.1 means 1/10
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class ExpanderParams:
    nu: Fraction
    tau: Fraction

    def __post_init__(self) -> None:
        nu, tau = as_fraction(self.nu), as_fraction(self.tau)
        if not 0 < nu <= tau < 1:
            raise ValueError(f"need 0 < nu <= tau < 1, got nu={nu}, tau={tau}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "tau", tau)

    @classmethod
    def default(cls, n: int) -> "ExpanderParams":
        """Engineering defaults: nu = ceil(n/20)/n, tau = 1/5."""
        return cls(Fraction(math.ceil(n / 20), n), Fraction(1, 5))

    def size_window(self, n: int) -> tuple[int, int]:
        return math.ceil(self.tau * n), math.floor((1 - self.tau) * n)


@dataclass(frozen=True)
class Mode:
    kind: str = "exhaustive"
    samples: int = 0
    seed: int = 0
    eps: Fraction | None = None

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "Mode":
        if text == "exhaustive":
            return cls("exhaustive")
        if text.startswith("sampled:"):
            k = int(text.split(":", 1)[1])
            if k <= 0:
                raise ValueError("sample count must be positive")
            return cls("sampled", k, seed)
        if text.startswith("degree-implied:"):
            return cls("degree-implied", eps=as_fraction(text.split(":", 1)[1]))
        raise ValueError(f"unknown mode {text!r}")

    def describe(self) -> str:
        if self.kind == "sampled":
            return f"sampled({self.samples},seed={self.seed})"
        if self.kind == "degree-implied":
            return f"degree-implied(eps={self.eps})"
        return self.kind


@dataclass
class ExpanderCertificate:
    params: ExpanderParams
    mode: Mode
    verdict: str
    violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    violation_count: int = 0
    checked: int = 0
    defaults: bool = False

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_record(self, limit: int = MAX_REPORTED_VIOLATIONS) -> dict:
        rec = {
            "params": {"nu": str(self.params.nu), "tau": str(self.params.tau)},
            "mode": self.mode.describe(),
            "verdict": self.verdict,
            "checked_sets": self.checked,
            "violation_count": self.violation_count,
            "violations": [{"S": list(S), "rn_size": k} for S, k in self.violations[:limit]],
        }
        if self.defaults:
            rec["note"] = "nu and tau are engineering defaults, not values fixed by theory"
        return rec


def threshold(nu: Fraction, n: int) -> int:
    return math.ceil(as_fraction(nu) * n)


def robust_out_neighbourhood(g: Digraph, S: Iterable[int], nu) -> frozenset[int]:
    s = set(S)
    t = threshold(nu, g.n)
    return frozenset(x for x in range(g.n) if sum(1 for u in g.in_neighbours[x] if u in s) >= t)


def expands(g: Digraph, S: Iterable[int], params: ExpanderParams) -> tuple[bool, int]:
    """Whether ``|RN(S)| >= |S| + nu*n`` and the size of RN(S)."""
    s = set(S)
    rn = len(robust_out_neighbourhood(g, s, params.nu))
    return rn >= len(s) + params.nu * g.n, rn


def _exhaustive(g: Digraph, params: ExpanderParams, keep: int) -> tuple[list, int, int]:
    n = g.n
    lo, hi = params.size_window(n)
    if lo > hi:
        return [], 0, 0
    t = threshold(params.nu, n)
    p, q = params.nu.numerator, params.nu.denominator
    in_masks = [np.uint64(sum(1 << u for u in g.in_neighbours[x])) for x in range(n)]
    violations: list = []
    count = 0
    checked = 0
    total = 1 << n
    for start in range(0, total, _CHUNK):
        S = np.arange(start, min(total, start + _CHUNK), dtype=np.uint64)
        size = np.bitwise_count(S).astype(np.int64)
        sel = (size >= lo) & (size <= hi)
        if not sel.any():
            continue
        S, size = S[sel], size[sel]
        checked += len(S)
        rn = np.zeros(len(S), dtype=np.int64)
        for m in in_masks:
            rn += np.bitwise_count(S & m) >= t
        bad = q * rn < q * size + p * n
        nbad = int(bad.sum())
        if nbad:
            count += nbad
            if len(violations) < keep:
                for s_val, k in zip(S[bad][: keep - len(violations)], rn[bad]):
                    s_int = int(s_val)
                    violations.append((tuple(v for v in range(n) if s_int >> v & 1), int(k)))
    return violations, count, checked


def _sampled(g: Digraph, params: ExpanderParams, k: int, seed: int, keep: int) -> tuple[list, int, int]:
    n = g.n
    lo, hi = params.size_window(n)
    if lo > hi:
        return [], 0, 0
    rng = random.Random(seed)
    sizes = list(range(lo, hi + 1))
    weights = [math.comb(n, s) for s in sizes]
    violations = []
    count = 0
    for _ in range(k):
        s = rng.choices(sizes, weights)[0]
        S = tuple(sorted(rng.sample(range(n), s)))
        ok, rn = expands(g, S, params)
        if not ok:
            count += 1
            if len(violations) < keep:
                violations.append((S, rn))
    return violations, count, k


def certify(
    g: Digraph,
    params: ExpanderParams | None = None,
    mode: Mode | str = "exhaustive",
    cap: int = EXHAUSTIVE_CAP,
    keep: int = MAX_REPORTED_VIOLATIONS,
) -> ExpanderCertificate:
    """Check robust (nu, tau)-outexpansion of ``g``.

    ``exhaustive`` scans every set in the size window and refuses graphs above
    ``cap`` vertices; ``sampled`` draws sets uniformly from the window;
    ``degree-implied`` evaluates the minimum-degree sufficient condition and
    answers ``pass`` or ``inconclusive``.
    """
    defaults = params is None
    if params is None:
        params = ExpanderParams.default(g.n)
    if isinstance(mode, str):
        mode = Mode.parse(mode)
    if mode.kind == "exhaustive":
        if g.n > cap:
            raise CapExceeded(f"exhaustive certification capped at {cap} vertices, graph has {g.n}")
        violations, count, checked = _exhaustive(g, params, keep)
    elif mode.kind == "sampled":
        violations, count, checked = _sampled(g, params, mode.samples, mode.seed, keep)
    elif mode.kind == "degree-implied":
        eps = mode.eps if mode.eps is not None else Fraction(0)
        if validate(g).is_oriented:
            holds = degree_condition_oriented(g, eps)
        else:
            holds = degree_condition_digraph(g, eps)
        verdict = "pass" if holds else "inconclusive"
        return ExpanderCertificate(params, mode, verdict, defaults=defaults)
    else:
        raise ValueError(f"unknown mode {mode.kind!r}")
    verdict = "fail" if count else "pass"
    return ExpanderCertificate(params, mode, verdict, violations, count, checked, defaults)


def degree_condition_oriented(g: Digraph, eps) -> bool:
    """delta+ + delta- + delta >= 3n/2 + eps*n, for oriented graphs."""
    if not validate(g).is_oriented:
        raise ValueError("degree_condition_oriented needs an oriented graph")
    if g.n == 0:
        return True
    dplus, dminus = min(g.out_degrees), min(g.in_degrees)
    dtotal = min(o + i for o, i in zip(g.out_degrees, g.in_degrees))
    return dplus + dminus + dtotal >= Fraction(3, 2) * g.n + as_fraction(eps) * g.n


def degree_condition_digraph(g: Digraph, eps) -> bool:
    """Minimum semidegree at least (1/2 + eps) n."""
    return g.min_semidegree() >= (Fraction(1, 2) + as_fraction(eps)) * g.n


def semidegree_implies_expansion(g: Digraph, params: ExpanderParams) -> bool:
    """Non-asymptotic sufficient condition: with eps = delta0/n - 1/2,
    ``nu <= tau <= eps`` and ``eps >= 2 nu / tau`` imply robust expansion."""
    if g.n == 0:
        return False
    eps = Fraction(g.min_semidegree(), g.n) - Fraction(1, 2)
    return params.nu <= params.tau <= eps and eps >= 2 * params.nu / params.tau


def blow_up(g: Digraph, r: int) -> Digraph:
    """r-fold blow-up: vertex x becomes the block x*r .. x*r + r - 1 and every
    edge xy becomes all r*r edges from block x to block y."""
    if r < 1:
        raise ValueError("blow-up factor must be at least 1")
    edges = [
        (u * r + i, v * r + j) for u, v in g.edges for i in range(r) for j in range(r)
    ]
    return Digraph(g.n * r, tuple(edges), g.multi)
