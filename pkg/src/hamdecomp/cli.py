"""Command-line interface.

Exit codes: 0 success or pass, 2 verified negative (expansion violated, no
decomposition exists), 3 inconclusive (search budget ran out), 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .decomposer import (
    CapRefused,
    DecomposeConfig,
    NotRegular,
    WeightMatrix,
    atsp_domination_tour,
    decompose,
    summarize,
    tournament_experiment,
)
from .digraph import complete_digraph, cycle_structure
from .expander import CapExceeded, ExpanderParams, Mode, as_fraction, certify
from .flow import one_factorization
from .formats import FORMAT_VERSION, FormatError, parse_weight_matrix, read_digraph

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 2, 3, 4


class InputError(Exception):
    pass


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _params(args) -> ExpanderParams | None:
    if args.nu is None and args.tau is None:
        return None
    if args.nu is None or args.tau is None:
        raise InputError("--nu and --tau must be given together")
    return ExpanderParams(as_fraction(args.nu), as_fraction(args.tau))


def _load(path: str):
    if not Path(path).is_file():
        raise InputError(f"no such file: {path}")
    return read_digraph(path)


def cmd_certify(args, out) -> int:
    g = _load(args.graph)
    mode = Mode.parse(args.mode, seed=args.seed)
    cert = certify(g, _params(args), mode, cap=args.cap)
    _dump(cert.to_record(), out)
    return {"pass": EXIT_OK, "fail": EXIT_NEGATIVE}.get(cert.verdict, EXIT_INCONCLUSIVE)


def cmd_factorize(args, out) -> int:
    g = _load(args.graph)
    if g.regularity() is None:
        raise NotRegular([(v, o, i) for v, (o, i) in enumerate(zip(g.out_degrees, g.in_degrees))])
    f = one_factorization(g)
    _dump(
        {
            "factors": [list(F.succ) for F in f.factors],
            "cycles": [[list(c) for c in cycle_structure(F).cycles] for F in f.factors],
            "cycle_counts": f.cycle_counts(),
        },
        out,
    )
    return EXIT_OK


def _config(args) -> DecomposeConfig:
    return DecomposeConfig(
        restarts=args.budget,
        steps=args.steps,
        certify=getattr(args, "certify", False),
        params=_params(args) if hasattr(args, "nu") else None,
        mode=getattr(args, "mode", "exhaustive"),
        seed=args.seed,
        jobs=args.jobs,
    )


_VERDICT_EXIT = {"success": EXIT_OK, "proved-impossible": EXIT_NEGATIVE, "failure": EXIT_INCONCLUSIVE}


def cmd_decompose(args, out) -> int:
    g = _load(args.graph)
    Mode.parse(args.mode)
    rep = decompose(g, _config(args))
    _dump(rep.to_record(timing=args.timing), out)
    return _VERDICT_EXIT[rep.verdict]


def cmd_tillson(args, out) -> int:
    if args.n < 3:
        raise InputError("tillson needs n >= 3")
    rep = decompose(complete_digraph(args.n), _config(args))
    _dump(rep.to_record(timing=args.timing), out)
    return _VERDICT_EXIT[rep.verdict]


def cmd_atsp(args, out) -> int:
    path = Path(args.weights)
    if not path.is_file():
        raise InputError(f"no such file: {path}")
    w = WeightMatrix.from_rows(parse_weight_matrix(path.read_text()))
    if w.n < 3:
        raise InputError("atsp needs n >= 3")
    res = atsp_domination_tour(w, args.seed, args.brute_force)
    _dump(res.to_record(), out)
    return EXIT_OK if res.bound_check else EXIT_NEGATIVE


def cmd_tournament(args, out) -> int:
    if args.n < 3 or args.trials < 0:
        raise InputError("tournament needs n >= 3 and a non-negative trial count")
    records = []
    for rec in tournament_experiment(args.n, args.trials, args.seed, jobs=args.jobs):
        records.append(rec)
        _dump(rec, out)
        out.flush()
    _dump(summarize(records), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hamdecomp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"hamdecomp {__version__} (format {FORMAT_VERSION})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for restarts and trials")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def expander_flags(q, default_mode="exhaustive"):
        q.add_argument("--nu", help="rational, e.g. 1/6")
        q.add_argument("--tau", help="rational, e.g. 1/3")
        q.add_argument("--mode", default=default_mode, help="exhaustive | sampled:K | degree-implied:EPS")

    def search_flags(q):
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--budget", type=int, default=64, help="restarts")
        q.add_argument("--steps", type=int, default=None, help="switch steps per restart (default n*n)")
        q.add_argument("--timing", action="store_true", help="include runtime in stats")

    q = sub.add_parser("certify", help="check robust outexpansion")
    expander_flags(q)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--cap", type=int, default=18, help="largest n for exhaustive mode")
    q.add_argument("graph")
    q.set_defaults(func=cmd_certify)

    q = sub.add_parser("factorize", help="split a regular digraph into 1-factors")
    q.add_argument("graph")
    q.set_defaults(func=cmd_factorize)

    q = sub.add_parser("decompose", help="Hamilton decomposition of a regular digraph")
    q.add_argument("--certify", action="store_true")
    expander_flags(q)
    search_flags(q)
    q.add_argument("graph")
    q.set_defaults(func=cmd_decompose)

    q = sub.add_parser("tillson", help="decompose the complete digraph on N vertices")
    search_flags(q)
    q.add_argument("n", type=int)
    q.set_defaults(func=cmd_tillson)

    q = sub.add_parser("atsp", help="tour from a decomposition of the complete digraph")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--brute-force", action=argparse.BooleanOptionalAction, default=None)
    q.add_argument("weights")
    q.set_defaults(func=cmd_atsp)

    q = sub.add_parser("tournament", help="random-tournament experiment (JSON lines)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--trials", type=int, default=100)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_tournament)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        if args.output:
            with open(args.output, "w") as fh:
                return args.func(args, fh)
        return args.func(args, out or sys.stdout)
    except (InputError, FormatError, NotRegular, CapExceeded, CapRefused, ValueError, OSError) as exc:
        print(f"hamdecomp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
