"""Command-line entry point: ``cks solve | gen | lab | experiment | report``.

Exit codes: 0 success (solve: optimal), 2 solve stopped on a limit,
3 lab oracle guard exceeded, 1 any other error (bad flags included).
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from .branchcut import CONFIGS, SolverConfig, solve_mws
from .experiment import run_grid, trend_specs
from .inequalities import format_inequality, read_inequalities
from .instances import (GeneratorSpec, ParseError, generate, multiway_from_spec, read_instance,
                        read_point, read_spec, write_instance, write_solution)
from .lab import (GuardExceeded, check_facet, check_perfect, check_validity, enumerate_subpartitions,
                  find_violated_by_enumeration, k_sets, polytope_dimension, subpartition_masks)
from .report import append_csv, csv_row, format_summary, plot_summary, read_csv, summarize, write_csv
from .separation import (separate_connectivity, separate_gencon_heuristic, separate_indegree_all,
                         separate_multiway, separate_pairing_tree)

log = logging.getLogger("cksub")

FAMILIES = ("cover", "connectivity", "indegree", "gencon", "multiway", "pairing")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _setup_logging():
    level = os.environ.get("CKS_LOG", "quiet").lower()
    levels = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    if level not in levels:
        log.warning("unknown CKS_LOG=%r, using quiet", level)


# ------------------------------------------------------------------ verbs


def run_solve(args) -> int:
    inst = read_instance(args.instance)
    cfg = SolverConfig(cuts=args.cuts, time_limit=args.time_limit, tol=args.tol,
                       node_limit=args.node_limit, seed=args.seed)
    rep = solve_mws(inst, cfg)
    print(f"instance {inst.name} n={inst.graph.n} m={inst.graph.m} k={inst.k} config={args.cuts}")
    print(rep.text())
    if args.out:
        write_solution(args.out, rep.objective, rep.classes)
    if args.csv:
        append_csv(args.csv, [csv_row(inst, args.cuts, rep)])
    return 0 if rep.status == "optimal" else 2


def run_gen(args) -> int:
    out = Path(args.out)
    count = args.batch or 1
    for i in range(count):
        spec = GeneratorSpec(args.model, args.n, args.p, args.k, args.seed + i)
        path = out if not args.batch else out.with_name(f"{out.stem}_{i}{out.suffix}")
        write_instance(path, generate(spec))
        print(path)
    return 0


def _load_point(args, inst):
    if not args.point:
        raise UsageError("--point is required")
    return read_point(args.point, inst.graph.n, inst.k)


def _load_ineqs(args, inst):
    if not args.ineq:
        raise UsageError("--ineq is required")
    ineqs = read_inequalities(args.ineq)
    for q in ineqs:
        q.check_dims(inst.graph.n, inst.k)
    return ineqs


def run_lab(args) -> int:
    inst = read_instance(args.instance)
    g, k = inst.graph, inst.k
    if args.what == "enumerate":
        masks = subpartition_masks(g, k)
        print(f"subpartitions {len(masks)}")
        print(f"dimension {polytope_dimension(g, k)} of {g.n * k}")
        if args.list:
            for sub in enumerate_subpartitions(g, k):
                print(sub)
    elif args.what == "validity":
        for q in _load_ineqs(args, inst):
            print(check_validity(g, k, q).line())
    elif args.what == "facet":
        for q in _load_ineqs(args, inst):
            print(check_facet(g, k, q).line())
    elif args.what == "perfect":
        if not args.spec:
            raise UsageError("--spec is required")
        spec = multiway_from_spec(read_spec(args.spec))
        sizes = " ".join(f"{z + 1}:{len(ks)}" for z, ks in sorted(k_sets(g, spec).items()))
        print(("PERFECT" if check_perfect(g, spec) else "NOT-PERFECT") + f" |K_z| {sizes}".rstrip())
    elif args.what == "separate":
        return _lab_separate(args, inst)
    return 0


def _lab_separate(args, inst) -> int:
    g, k = inst.graph, inst.k
    fam = args.family
    if fam is None:
        raise UsageError("--family is required")
    x = _load_point(args, inst)
    found = None
    if fam == "pairing":
        if not g.is_tree():
            raise ValueError("pairing separation is only available on trees")
        if not args.spec:
            raise UsageError("--spec with C and D lines is required for pairing")
        spec = read_spec(args.spec)
        cset = spec["C"] or tuple(sorted(spec["D"]))
        _, found = separate_pairing_tree(g, cset, spec["D"], x)
    elif args.exhaustive or fam == "cover":
        found = find_violated_by_enumeration(g, k, x, fam)
    elif fam == "connectivity":
        out = separate_connectivity(g, k, x)
        found = out.cuts[0][0] if out.cuts else None
    elif fam == "indegree":
        out = separate_indegree_all(g, k, x)
        found = max(out.cuts, key=lambda t: t[1])[0] if out.cuts else None
    elif fam == "gencon":
        out = separate_gencon_heuristic(g, k, x)
        found = max(out.cuts, key=lambda t: t[1])[0] if out.cuts else None
    elif fam == "multiway":
        found = separate_multiway(g, k, x)
    if found is None or (fam != "pairing" and found.violation(x) <= 0):
        print("NONE")
        return 0
    print(format_inequality(found))
    viol = found.violation(x)
    print(f"lhs {_q(found.evaluate(x))} violation {_q(viol)}")
    return 0


def _q(v) -> str:
    return str(v) if not hasattr(v, "denominator") or v.denominator != 1 else str(v.numerator)


def run_experiment(args) -> int:
    specs = trend_specs(n=args.n, per_p=args.per_p, base_seed=args.seed)

    def progress(spec, cfg, rep):
        log.info("%s %s %s obj=%d nodes=%d", spec.name, cfg, rep.status, rep.objective, rep.nodes)

    res = run_grid(specs, node_limit=args.node_limit, time_limit=args.time_limit, progress=progress)
    write_csv(args.csv, res.rows)
    print(format_summary(summarize(read_csv(args.csv))))
    print(f"solved by some config: {res.solved_by_some()}/{len(specs)}")
    print(f"optimum disagreements: {len(res.optima_agree())}")
    for c in ("bc+i", "bc+g", "bc+m"):
        print(f"root bound <= bc: {c} {res.root_bound_share(c):.0%}")
    if res.time_limit_hits:
        print(f"warning: {res.time_limit_hits} runs hit the wall-clock backstop (results not reproducible)")
    if not args.no_plots:
        for path in plot_summary(args.csv):
            print(path)
    return 0


def run_report(args) -> int:
    print(format_summary(summarize(read_csv(args.csv))))
    for path in plot_summary(args.csv):
        print(path)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cks", description="Connected k-subpartition lab and MWS branch-and-cut.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an MWS instance by branch-and-cut")
    s.add_argument("--instance", required=True)
    s.add_argument("--out", help="solution file to write")
    s.add_argument("--cuts", choices=list(CONFIGS), default="bc")
    s.add_argument("--time-limit", type=float, default=900.0)
    s.add_argument("--node-limit", type=int)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--csv", help="append a result row to this CSV")
    s.set_defaults(func=run_solve)

    gp = sub.add_parser("gen", help="generate random instances")
    gp.add_argument("--model", choices=["er", "bipartite"], default="er")
    gp.add_argument("--n", type=int, default=100)
    gp.add_argument("--p", type=float, default=0.05)
    gp.add_argument("--k", type=int, default=2)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--out", required=True)
    gp.add_argument("--batch", type=int, help="write N files <stem>_<i><suffix> with seeds seed+i")
    gp.set_defaults(func=run_gen)

    lp = sub.add_parser("lab", help="polytope lab: enumeration, validity, facets, separation")
    lp.add_argument("what", choices=["enumerate", "validity", "facet", "perfect", "separate"])
    lp.add_argument("--instance", required=True)
    lp.add_argument("--ineq", help="inequality file")
    lp.add_argument("--point", help="fractional point file")
    lp.add_argument("--spec", help="multiway / pairing spec file")
    lp.add_argument("--family", choices=FAMILIES)
    lp.add_argument("--exhaustive", action="store_true", help="separate by enumeration")
    lp.add_argument("--list", action="store_true", help="enumerate: print every subpartition")
    lp.set_defaults(func=run_lab)

    ep = sub.add_parser("experiment", help="scaled-down ER grid, CSV plus figures")
    ep.add_argument("--csv", required=True)
    ep.add_argument("--n", type=int, default=30)
    ep.add_argument("--per-p", type=int, default=10)
    ep.add_argument("--seed", type=int, default=0)
    ep.add_argument("--node-limit", type=int, default=100)
    ep.add_argument("--time-limit", type=float, default=60.0)
    ep.add_argument("--no-plots", action="store_true")
    ep.set_defaults(func=run_experiment)

    rp = sub.add_parser("report", help="summary table and figures for a results CSV")
    rp.add_argument("--csv", required=True)
    rp.set_defaults(func=run_report)
    return p


def main(argv=None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
        with_batch = getattr(args, "batch", None)
        if with_batch is not None and with_batch < 1:
            raise UsageError("--batch must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"cks: error: {exc}", file=sys.stderr)
        return 1
    except GuardExceeded as exc:
        print(f"cks: oracle guard exceeded: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValueError, OSError) as exc:
        print(f"cks: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
