"""Batch command-line front end.

Every command prints one JSON report: {"command", "seed", "results",
"certificates", "timings_ms"}.  Results are byte-deterministic for fixed
arguments, seed, and input files; wall-clock timings live in their own field.

Exit codes: 0 success, 2 usage, 3 budget exceeded, 4 precondition or
certificate failure, 5 identity violation (counterexample in the report).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import arrangement as arr_mod
from . import bounds, minkowski, verify
from .arrangement import (
    DEFAULT_LP_BUDGET,
    DEFAULT_SIGNATURE_BUDGET,
    build_atoms,
    build_poset,
    count_faces_poset,
    count_regions_bruteforce,
    count_regions_poset,
    enumerate_cells,
    is_simple,
)
from .linprog import BudgetExceededError
from .network import (
    NO_BIAS,
    WITH_BIAS,
    NetworkParseError,
    construct_deep_lower,
    construct_shallow_optimal,
    construct_shallow_optimal_nobias,
    count_regions_line,
    parse_network,
    sample_generic,
    serialize_network,
    single_layer_network,
)
from .rational import format_rational

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PRECONDITION = 4
EXIT_IDENTITY = 5

_start = time.monotonic()


def _emit(args, results, certificates=None, stream=None):
    stream = stream or sys.stdout
    report = {
        "command": args._command_echo,
        "seed": getattr(args, "seed", None),
        "results": results,
        "certificates": certificates or {},
        "timings_ms": {"wall": round((time.monotonic() - _start) * 1000, 3)},
    }
    json.dump(report, stream, sort_keys=True)
    stream.write("\n")


def _ranks(text: str) -> list[int]:
    try:
        out = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list: {text!r}")
    if not out or any(v < 1 for v in out):
        raise argparse.ArgumentTypeError("ranks/widths must be positive integers")
    return out


def _load_network(path: str):
    with open(path) as fh:
        return parse_network(fh.read())


def _write_out(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _budgets(args):
    lp = args.lp_budget
    env = os.environ.get("TROPIC_BUDGET_LP")
    if lp is None:
        lp = int(env) if env else DEFAULT_LP_BUDGET
    return lp, args.max_signatures


def cmd_bounds(args) -> int:
    if args.kind == "shallow":
        value = bounds.shallow_formula(args.inputs, args.ranks, not args.no_bias)
        results = {
            "regions_max": value,
            "trivial": bounds.trivial_bound(args.ranks),
            "bias_mode": NO_BIAS if args.no_bias else WITH_BIAS,
        }
        if args.table:
            print(f"inputs={args.inputs} ranks={args.ranks} -> max regions {value} "
                  f"(trivial {results['trivial']})", file=sys.stderr)
    elif args.kind == "deep":
        upper = bounds.deep_upper_uniform(args.inputs, args.widths, args.rank, not args.no_bias)
        results = {"upper": upper, "bias_mode": NO_BIAS if args.no_bias else WITH_BIAS}
        try:
            low = bounds.deep_lower(args.inputs, args.widths, args.rank, not args.no_bias)
            results["lower"] = low.value
            results["lower_n"] = low.n
        except ValueError as exc:
            results["lower_error"] = str(exc)
    else:
        lower, upper = bounds.prior_bounds(args.inputs, args.units, args.rank)
        results = {"lower": lower, "upper": upper}
    _emit(args, results)
    return EXIT_OK


def cmd_regions(args) -> int:
    net = _load_network(args.network)
    lp_budget, max_sig = _budgets(args)
    results: dict = {}
    certificates: dict = {}
    methods = ["pattern", "poset", "dual"] if args.method == "all" else [args.method]

    if len(net.layers) > 1:
        if args.method not in ("pattern", "all") or net.input_dim != 1:
            print("multi-layer networks support only --method pattern with one input",
                  file=sys.stderr)
            return EXIT_PRECONDITION
        results["pattern"] = {"regions": count_regions_line(net)}
        _emit(args, results, certificates)
        return EXIT_OK

    layer = net.layers[0]
    if args.require_simple or "poset" in methods or "dual" in methods:
        cert = is_simple(build_atoms(layer), lp_budget=lp_budget)
        certificates["simple"] = cert.simple
        if args.require_simple and not cert.simple:
            print(f"arrangement is not simple: atoms {cert.violation}", file=sys.stderr)
            return EXIT_PRECONDITION

    for method in methods:
        if method == "pattern":
            rc = count_regions_bruteforce(layer, max_signatures=max_sig,
                                          lp_budget=lp_budget, jobs=args.jobs)
            results["pattern"] = {"regions": rc.regions, "bounded_regions": rc.bounded_regions}
        elif method == "poset":
            results["poset"] = {"regions": count_regions_poset(build_atoms(layer))}
        else:
            if layer.bias_mode == WITH_BIAS:
                chk = minkowski.duality_check(layer, lp_budget=lp_budget)
                results["dual"] = {"regions": chk.upper_vertex_count}
            else:
                total = minkowski.minkowski_sum(minkowski.lift_layer(layer))
                results["dual"] = {"regions": minkowski.vertex_count(total)}
    if args.method == "all":
        counts = {results[m]["regions"] for m in results}
        results["consistent"] = len(counts) == 1
    _emit(args, results, certificates)
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "shallow-max":
        if args.no_bias:
            layer = construct_shallow_optimal_nobias(args.inputs, args.ranks, args.seed)
        else:
            layer = construct_shallow_optimal(args.inputs, args.ranks, args.seed)
        net = single_layer_network(layer)
    else:
        net = construct_deep_lower(args.inputs, args.widths, args.rank, args.seed)
    _write_out(args, serialize_network(net))
    return EXIT_OK


def cmd_sample(args) -> int:
    mode = NO_BIAS if args.no_bias else WITH_BIAS
    layer = sample_generic(args.inputs, args.ranks, mode, args.seed, magnitude=args.magnitude)
    _write_out(args, serialize_network(single_layer_network(layer)))
    return EXIT_OK


def cmd_poset(args) -> int:
    net = _load_network(args.network)
    if len(net.layers) != 1:
        print("poset dump needs a single-layer network", file=sys.stderr)
        return EXIT_PRECONDITION
    lp_budget, _ = _budgets(args)
    arr = build_atoms(net.layers[0])
    poset = build_poset(arr, lp_budget=lp_budget)
    elements = []
    for e in poset.elements:
        elements.append({
            "id": e.id,
            "dim": e.dim,
            "psi": e.psi,
            "mobius": poset.mobius_from_bottom[e.id],
            "support": sorted(e.support) if e.support is not None else None,
            "atoms": sorted(e.atom_support),
        })
    covers = []
    n = len(poset.elements)
    for i in range(n):
        for j in range(n):
            if i == j or not poset.leq[i][j]:
                continue
            if not any(k not in (i, j) and poset.leq[i][k] and poset.leq[k][j] for k in range(n)):
                covers.append([i, j])
    doc = {
        "atoms": [
            {"id": k, "unit": a.unit, "pair": list(a.pair)}
            for k, a in enumerate(arr.atoms)
        ],
        "central": arr.central,
        "elements": elements,
        "covers": covers,
        "regions": count_regions_poset(arr, poset),
        "faces": {
            str(s): count_faces_poset(arr, s, poset) for s in range(arr.ambient_dim)
        },
    }
    _write_out(args, json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_cells(args) -> int:
    net = _load_network(args.network)
    if len(net.layers) != 1:
        print("cell dump needs a single-layer network", file=sys.stderr)
        return EXIT_PRECONDITION
    lp_budget, max_sig = _budgets(args)
    cells = enumerate_cells(net.layers[0], max_signatures=max_sig, lp_budget=lp_budget)
    doc = {
        "cells": [
            {
                "signature": [sorted(t) for t in c.signature],
                "dim": c.dim,
                "bounded": c.bounded,
                "witness": [format_rational(v) for v in c.witness],
            }
            for c in cells
        ]
    }
    _write_out(args, json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_minkowski(args) -> int:
    if args.kind == "classify":
        with open(args.points) as fh:
            ps = minkowski.parse_point_set(fh.read())
        cls = minkowski.classify_vertices(ps)
        _emit(args, minkowski.classification_json(cls))
        return EXIT_OK
    net = _load_network(args.network)
    if len(net.layers) != 1:
        print("lift-sum needs a single-layer network", file=sys.stderr)
        return EXIT_PRECONDITION
    total = minkowski.minkowski_sum(minkowski.lift_layer(net.layers[0]))
    _write_out(args, minkowski.serialize_point_set(total))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = None if args.suite == "all" else [args.suite]
    reports = verify.run_suites(args.trials, args.seed, names)
    ok = all(not r["failures"] for r in reports)
    _emit(args, {"suites": reports, "all_passed": ok})
    return EXIT_OK if ok else EXIT_IDENTITY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropic", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_budget_flags(sp):
        sp.add_argument("--lp-budget", type=int, default=None,
                        help="LP-call budget (default 10^6; env TROPIC_BUDGET_LP)")
        sp.add_argument("--max-signatures", type=int, default=DEFAULT_SIGNATURE_BUDGET)

    b = sub.add_parser("bounds", help="closed-form bound evaluation")
    bsub = b.add_subparsers(dest="kind", required=True)
    bs = bsub.add_parser("shallow")
    bs.add_argument("--inputs", type=int, required=True)
    bs.add_argument("--ranks", type=_ranks, required=True)
    bs.add_argument("--no-bias", action="store_true")
    bs.add_argument("--table", action="store_true")
    bs.set_defaults(func=cmd_bounds)
    bd = bsub.add_parser("deep")
    bd.add_argument("--inputs", type=int, required=True)
    bd.add_argument("--widths", type=_ranks, required=True)
    bd.add_argument("--rank", type=int, required=True)
    bd.add_argument("--no-bias", action="store_true")
    bd.set_defaults(func=cmd_bounds)
    bp = bsub.add_parser("prior")
    bp.add_argument("--inputs", type=int, required=True)
    bp.add_argument("--units", type=int, required=True)
    bp.add_argument("--rank", type=int, required=True)
    bp.set_defaults(func=cmd_bounds)

    r = sub.add_parser("regions", help="region counting")
    rsub = r.add_subparsers(dest="kind", required=True)
    rc = rsub.add_parser("count")
    rc.add_argument("--network", required=True)
    rc.add_argument("--method", choices=["pattern", "poset", "dual", "all"], default="pattern")
    rc.add_argument("--require-simple", action="store_true")
    rc.add_argument("--jobs", type=int, default=1)
    add_budget_flags(rc)
    rc.set_defaults(func=cmd_regions)

    c = sub.add_parser("construct", help="bound-attaining constructions")
    csub = c.add_subparsers(dest="kind", required=True)
    cs = csub.add_parser("shallow-max")
    cs.add_argument("--inputs", type=int, required=True)
    cs.add_argument("--ranks", type=_ranks, required=True)
    cs.add_argument("--seed", type=int, required=True)
    cs.add_argument("--no-bias", action="store_true")
    cs.add_argument("-o", "--output")
    cs.set_defaults(func=cmd_construct)
    cd = csub.add_parser("deep-lower")
    cd.add_argument("--inputs", type=int, required=True)
    cd.add_argument("--widths", type=_ranks, required=True)
    cd.add_argument("--rank", type=int, required=True)
    cd.add_argument("--seed", type=int, required=True)
    cd.add_argument("-o", "--output")
    cd.set_defaults(func=cmd_construct)

    s = sub.add_parser("sample", help="seeded generic layers (certified simple)")
    ssub = s.add_subparsers(dest="kind", required=True)
    sl = ssub.add_parser("layer")
    sl.add_argument("--inputs", type=int, required=True)
    sl.add_argument("--ranks", type=_ranks, required=True)
    sl.add_argument("--seed", type=int, required=True)
    sl.add_argument("--no-bias", action="store_true")
    sl.add_argument("--magnitude", type=int, default=12)
    sl.add_argument("-o", "--output")
    sl.set_defaults(func=cmd_sample)

    po = sub.add_parser("poset", help="intersection poset dump")
    posub = po.add_subparsers(dest="kind", required=True)
    pd = posub.add_parser("dump")
    pd.add_argument("--network", required=True)
    pd.add_argument("-o", "--output")
    add_budget_flags(pd)
    pd.set_defaults(func=cmd_poset)
    pc = posub.add_parser("cells")
    pc.add_argument("--network", required=True)
    pc.add_argument("-o", "--output")
    add_budget_flags(pc)
    pc.set_defaults(func=cmd_cells)

    mk = sub.add_parser("minkowski", help="point-set sums and classification")
    mksub = mk.add_subparsers(dest="kind", required=True)
    mc = mksub.add_parser("classify")
    mc.add_argument("--points", required=True)
    mc.set_defaults(func=cmd_minkowski)
    ml = mksub.add_parser("lift-sum")
    ml.add_argument("--network", required=True)
    ml.add_argument("-o", "--output")
    ml.set_defaults(func=cmd_minkowski)

    v = sub.add_parser("verify", help="identity suites with counterexample dumps")
    vsub = v.add_subparsers(dest="kind", required=True)
    vi = vsub.add_parser("identities")
    vi.add_argument("--trials", type=int, required=True)
    vi.add_argument("--seed", type=int, required=True)
    vi.add_argument("--suite", choices=["all"] + list(verify.ALL_SUITES), default="all")
    vi.set_defaults(func=cmd_verify)

    return p


def main(argv=None) -> int:
    global _start
    _start = time.monotonic()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    args._command_echo = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    except (NetworkParseError, FileNotFoundError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
