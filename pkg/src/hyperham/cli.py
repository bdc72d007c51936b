"""``hyperham`` command line: gen, shave, solve, sweep, oracle, validate, bounds.

Exit codes: 0 success, 1 usage or input error, 2 a well-formed negative
answer (pipeline failure, invalid witness, oracle NO/UNKNOWN).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .bounds import InapplicableRegime, bound_report, sharpness_threshold
from .experiments import MODELS, SweepSpec, default_workers, geometric_grid, run_sweep
from .hypergraph import (
    CycleWitness,
    Hypergraph,
    HypergraphError,
    first_violation,
    format_hypergraph,
    format_witness,
    parse_witness,
    read_hypergraph,
)
from .oracle import YES, SearchBudget, ell_path_exists, hamilton_exists
from .pipeline import PipelineConfig, find_hamilton_cycle
from .random_models import RandomSpec, extremal_h0, gnp
from .shaving import shave

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    if args.model == "union":
        if not args.inputs:
            raise HypergraphError("--model union needs at least one --input")
        graphs = [read_hypergraph(p) for p in args.inputs]
        h = graphs[0].union(*graphs[1:])
    else:
        if args.n is None:
            raise HypergraphError(f"--model {args.model} needs --n")
        if args.model == "complete":
            h = Hypergraph.complete(args.k, args.n)
        elif args.model == "empty":
            h = Hypergraph.empty(args.k, args.n)
        elif args.model == "h0":
            h = extremal_h0(args.n, args.k, args.alpha)
        else:
            h = gnp(RandomSpec(args.n, args.k, args.p, args.seed))
    _emit(format_hypergraph(h), args.out)
    return EXIT_OK


def cmd_shave(args) -> int:
    h = read_hypergraph(args.graph)
    res = shave(h, args.ell, args.theta, args.vertex_bound)
    if args.out:
        _emit(format_hypergraph(res.shaved), args.out)
    summary = res.summary()
    summary["low_vertex_list"] = sorted(res.low_vertices)
    _dump(summary)
    return EXIT_OK


def _config(args, k: int) -> PipelineConfig:
    return PipelineConfig(
        k=k,
        ell=args.ell,
        alpha=args.alpha,
        shave_eta=args.eta,
        cover_zeta=args.zeta,
        seed=args.seed,
        max_retries=args.retries,
    )


def cmd_solve(args) -> int:
    h = read_hypergraph(args.graph)
    cfg = _config(args, h.k)
    result = find_hamilton_cycle(h, args.p, cfg)
    record = result.to_dict()
    record.update({"seed": args.seed, "p": args.p, "n": h.n, "k": h.k, "ell": args.ell})
    if args.verify_oracle:
        if h.n <= args.oracle_limit:
            verdict = hamilton_exists(h.union(*result.rounds), args.ell, SearchBudget(args.node_limit))
            record["oracle"] = verdict.status
        else:
            record["oracle"] = "skipped"
    if args.emit_witness and result.witness is not None:
        _emit(format_witness(result.witness.order), args.emit_witness)
    _dump(record)
    return EXIT_OK if result.success else EXIT_NEGATIVE


def cmd_sweep(args) -> int:
    if args.p_range:
        lo, hi, pts = args.p_range
        ps = geometric_grid(float(lo), float(hi), int(pts))
    elif args.p:
        ps = list(args.p)
    else:
        raise HypergraphError("give --p values or --p-range LO HI POINTS")
    spec = SweepSpec(
        k=args.k,
        ell=args.ell,
        ns=list(args.n),
        ps=ps,
        trials=args.trials,
        seed=args.seed,
        model=args.model,
        alpha=args.alpha,
        graph_path=args.graph,
        oracle_limit=args.oracle_limit,
        workers=args.workers if args.workers is not None else default_workers(),
    )
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            run_sweep(spec, fh)
    else:
        run_sweep(spec, sys.stdout)
    return EXIT_OK


def cmd_oracle(args) -> int:
    h = read_hypergraph(args.graph)
    budget = SearchBudget(args.node_limit, args.time_limit_ms)
    if args.path_edges is not None:
        res = ell_path_exists(h, args.ell, args.path_edges, budget)
    else:
        res = hamilton_exists(h, args.ell, budget)
    print(res.status.upper())
    if res.witness is not None:
        sys.stdout.write(format_witness(res.witness))
    return EXIT_OK if res.status == YES else EXIT_NEGATIVE


def cmd_validate(args) -> int:
    h = read_hypergraph(args.graph)
    with open(args.witness, encoding="utf-8") as fh:
        order = parse_witness(fh.read())
    bad = first_violation(h, CycleWitness(order, h.k, args.ell))
    if bad is None:
        print("valid")
        return EXIT_OK
    kind, where = bad
    if kind == "window":
        print(f"invalid: window {where} is not an edge")
    else:
        print(f"invalid: coverage error at position {where}")
    return EXIT_NEGATIVE


def cmd_bounds(args) -> int:
    report = bound_report(args.k, args.ell, args.a, args.x, args.n, args.p).to_dict()
    if args.alpha is not None:
        try:
            report["sharpness_threshold"] = sharpness_threshold(args.k, args.ell, args.alpha, args.n)
        except InapplicableRegime as exc:
            report["sharpness_threshold"] = None
            report["sharpness_note"] = str(exc)
    _dump(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperham", description="Hamiltonian l-cycles in randomly perturbed k-graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a hypergraph file")
    g.add_argument("--model", choices=["gnp", "h0", "complete", "empty", "union"], required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--p", type=float, default=0.0)
    g.add_argument("--alpha", type=float, default=0.3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--input", dest="inputs", action="append", help="graph file for --model union (repeatable)")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("shave", help="delete stars of low-degree l-sets")
    s.add_argument("graph")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--theta", type=int, required=True)
    s.add_argument("--vertex-bound", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_shave)

    solve = sub.add_parser("solve", help="run the absorbing pipeline on H plus G(n, p)")
    solve.add_argument("graph")
    solve.add_argument("--ell", type=int, default=2)
    solve.add_argument("--p", type=float, required=True)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--alpha", type=float)
    solve.add_argument("--eta", type=float)
    solve.add_argument("--zeta", type=float, default=0.2)
    solve.add_argument("--retries", type=int, default=3)
    solve.add_argument("--verify-oracle", action="store_true")
    solve.add_argument("--oracle-limit", type=int, default=12)
    solve.add_argument("--node-limit", type=int, default=5_000_000)
    solve.add_argument("--emit-witness", metavar="PATH")
    solve.set_defaults(func=cmd_solve)

    sw = sub.add_parser("sweep", help="Monte Carlo success rates over an (n, p) grid as CSV")
    sw.add_argument("--k", type=int, default=3)
    sw.add_argument("--ell", type=int, default=2)
    sw.add_argument("--n", type=int, nargs="+", required=True)
    sw.add_argument("--p", type=float, nargs="+")
    sw.add_argument("--p-range", nargs=3, metavar=("LO", "HI", "POINTS"))
    sw.add_argument("--trials", type=int, default=10)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--model", choices=MODELS, default="h0")
    sw.add_argument("--alpha", type=float, default=0.3)
    sw.add_argument("--graph", help="host graph file for --model file")
    sw.add_argument("--oracle-limit", type=int, default=0, help="run the exact oracle when n <= this")
    sw.add_argument("--workers", type=int, help="process count (default $HYPERHAM_WORKERS or 1)")
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle", help="exact search for a Hamiltonian l-cycle or an l-path")
    o.add_argument("graph")
    o.add_argument("--ell", type=int, required=True)
    o.add_argument("--path-edges", type=int, help="look for an l-path with this many edges instead")
    o.add_argument("--node-limit", type=int, default=5_000_000)
    o.add_argument("--time-limit-ms", type=int, default=60_000)
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("validate", help="check a cyclic order against a graph")
    v.add_argument("graph")
    v.add_argument("witness")
    v.add_argument("--ell", type=int, required=True)
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("bounds", help="second-moment, Janson and Chernoff numbers as JSON")
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--a", type=int, required=True)
    b.add_argument("--x", type=int, default=0)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--alpha", type=float, help="also report the sharpness threshold for H0(alpha)")
    b.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (HypergraphError, OSError) as exc:
        print(f"hyperham {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
