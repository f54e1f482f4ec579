"""Random-tournament experiment over several orders.

Writes one JSON line per trial and a table of success rates per n.

    python scripts/tournament_sweep.py --sizes 15 21 --trials 100 50 --seed 7
"""

from __future__ import annotations

import argparse
import json
import time
from collections import Counter

from hamdecomp.decomposer import TournamentConfig, summarize, tournament_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[15, 21])
    ap.add_argument("--trials", type=int, nargs="+", default=[100, 50], help="one count per size, or one for all")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--restarts", type=int, default=16, help="switching restarts per extracted subdigraph")
    ap.add_argument("--out", default=None, help="JSON-lines file for per-trial records")
    args = ap.parse_args()

    trials = args.trials if len(args.trials) == len(args.sizes) else args.trials[:1] * len(args.sizes)
    config = TournamentConfig(restarts=args.restarts)
    sink = open(args.out, "w") if args.out else None
    print(f"{'n':>4} {'trials':>6} {'rate':>6} {'secs':>7}  delta0 histogram / failures")
    try:
        for n, t in zip(args.sizes, trials):
            t0 = time.perf_counter()
            recs = []
            for rec in tournament_experiment(n, t, args.seed, jobs=args.jobs, config=config):
                recs.append(rec)
                if sink:
                    sink.write(json.dumps(rec, sort_keys=True) + "\n")
            s = summarize(recs)
            hist = dict(sorted(Counter(r["delta0"] for r in recs).items()))
            print(f"{n:>4} {t:>6} {s['success_rate']:>6.2f} {time.perf_counter() - t0:>7.1f}  {hist} {s['failed_trials']}")
    finally:
        if sink:
            sink.close()


if __name__ == "__main__":
    main()
