"""Complete digraphs: which orders decompose, and how good the ATSP tour is.

For each n the complete digraph is decomposed (switching first, exact oracle
as fallback) and random weight matrices are scored by the lightest cycle of
the decomposition.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from hamdecomp.decomposer import DecomposeConfig, WeightMatrix, atsp_domination_tour, decompose
from hamdecomp.digraph import complete_digraph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=9)
    ap.add_argument("--matrices", type=int, default=20, help="weight matrices per n for the tour table")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("decomposition of the complete digraph")
    print(f"{'n':>3} {'verdict':>18} {'method':>10} {'restarts':>8} {'secs':>6}")
    for n in range(3, args.max_n + 1):
        rep = decompose(complete_digraph(n), DecomposeConfig(seed=args.seed))
        s = rep.stats
        print(f"{n:>3} {rep.verdict:>18} {s['method']:>10} {s['restarts']:>8} {s['runtime']:>6.2f}")

    print("\nlightest decomposition cycle vs. mean tour weight")
    print(f"{'n':>3} {'route':>13} {'weight/mean':>12} {'domination':>11}")
    rng = random.Random(args.seed)
    for n in range(3, min(args.max_n, 8) + 1):
        ratios, doms, route = [], [], ""
        for _ in range(args.matrices):
            w = WeightMatrix.random(n, rng.getrandbits(32))
            res = atsp_domination_tour(w, seed=rng.getrandbits(16))
            route = res.route
            if res.mean:
                ratios.append(float(res.weight / res.mean))
            doms.append(res.domination_count / res.tours_total)
        print(f"{n:>3} {route:>13} {statistics.mean(ratios):>12.3f} {statistics.mean(doms):>11.3f}")


if __name__ == "__main__":
    t0 = time.perf_counter()
    main()
    print(f"\n{time.perf_counter() - t0:.1f}s")
