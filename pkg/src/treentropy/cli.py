"""Command-line front end.

    treentropy count  --family complete:n=5 --route all
    treentropy count  --file example4.g --route entropy_pi --ell 2
    treentropy bounds --family multistar:n=5,k=4 --json
    treentropy verify --sizes 4..10 --p 0.5

Exit codes: 0 success, 1 unusable input, 2 route disagreement or a count
that failed integer reconciliation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from treentropy.bounds import DegenerateGraphError, bound_quadratic, bound_suite
from treentropy.gen import connected, generate, parse_family
from treentropy.graphcore import GraphError
from treentropy.report import (
    counts_agree,
    format_graph,
    new_report,
    parse_route,
    read_graph_file,
    run_routes,
    timed,
)
from treentropy.treecount import ROUND_RTOL, NumericalError, Route
from treentropy.verify import run_battery

log = logging.getLogger("treentropy")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
ROUTE_CHOICES = [r.value for r in Route if r is not Route.deletion_contraction] + ["dc", "all"]


def _sig(x) -> str:
    return f"{x:.12g}"


def _load(args):
    if args.file and args.family:
        raise GraphError("give either --file or --family, not both")
    if args.file:
        return read_graph_file(args.file), args.file
    if args.family:
        spec = parse_family(args.family)
        if args.seed is not None:
            spec = type(spec)(spec.family, spec.n, spec.k, spec.p, args.seed)
        return generate(spec), spec.label()
    raise GraphError("one of --file or --family is required")


def _emit(report, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print("\n".join(lines))


def cmd_count(args) -> int:
    G, source = _load(args)
    report = new_report(G, source)
    if args.route == "all":
        routes = list(Route)
    else:
        routes = [parse_route(args.route)]
    outcomes = timed(report, "routes", run_routes, G, routes, args.ell, args.tol)
    report.routes = outcomes
    results = [o.result for o in outcomes if o.result is not None]
    report.agree = counts_agree(results, args.tol)
    if results:
        report.tau = results[0].rounded

    lines = [f"graph  {source}  n={G.n} volume={report.volume}"]
    for o in outcomes:
        if o.result is None:
            lines.append(f"  {o.route.value:<22} skipped: {o.skipped}")
        else:
            lines.append(f"  {o.route.value:<22} raw={_sig(o.result.raw):<20} rounded={o.result.rounded}")
    if not results:
        lines.append("no route applicable")
    else:
        lines.append(f"tau = {report.tau}" + ("" if report.agree else "  (ROUTES DISAGREE)"))
    _emit(report, args.json, lines)
    if not results:
        return EXIT_INPUT
    return EXIT_OK if report.agree else EXIT_NUMERIC


def cmd_bounds(args) -> int:
    G, source = _load(args)
    if G.n < 2:
        raise GraphError("bounds need n >= 2")
    report = new_report(G, source)
    bounds = timed(report, "bounds", bound_suite, G)
    report.bounds = bounds
    report.tau = bounds.tau_exact
    if connected(G):
        try:
            lb, trace = timed(report, "quadratic", bound_quadratic, G, args.ell)
            report.quadratic = {"lower_bound": lb, "trace": trace, "experimental": True}
        except (DegenerateGraphError, ValueError) as exc:
            log.info("quadratic bound skipped: %s", exc)

    tight = set(bounds.tight())
    lines = [f"graph  {source}  n={G.n} volume={report.volume}", f"  tau_exact   {bounds.tau_exact}"]
    for name, value in bounds.upper_bounds().items():
        mark = "  tight" if name in tight else ""
        lines.append(f"  {name:<11} {_sig(value)}{mark}")
    if bounds.lower_detL is not None:
        lines.append(f"  lower_detL  {_sig(bounds.lower_detL)}")
    if report.quadratic:
        lines.append(f"  quadratic   {_sig(report.quadratic['lower_bound'])}  (experimental lower bound)")
    if bounds.degenerate:
        lines.append("  degenerate: det(Delta) = 0, bounds needing det(Delta) set to 0")
    for o in bounds.orderings:
        verdict = ("ok" if o.holds else "VIOLATED") if o.asserted else ("yes" if o.holds else "no")
        lines.append(f"  {o.name:<24} {verdict:<9} slack={o.slack:.3e}")
    _emit(report, args.json, lines)
    failed = [o for o in bounds.orderings if o.asserted and not o.holds]
    return EXIT_NUMERIC if failed else EXIT_OK


def _parse_sizes(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        return range(int(lo), int(lo) + 1)
    return range(int(lo), int(hi) + 1)


def cmd_verify(args) -> int:
    sizes = _parse_sizes(args.sizes)
    ps = tuple(float(p) for p in args.p.split(","))
    seed = 42 if args.seed is None else args.seed
    results = run_battery(count=args.count, multigraphs=args.multigraphs, sizes=sizes,
                          ps=ps, seed=seed, rtol=args.tol)
    ok = True
    for r in results:
        if r.passed:
            print(f"PASS  {r.name}  ({r.checks} checks)")
        else:
            ok = False
            print(f"FAIL  {r.name}: {r.failure}")
            if r.graph:
                print(r.graph, end="")
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treentropy", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_opts(p):
        p.add_argument("--file", help="graph file: 'n m' header then m lines 'i j [mult]'")
        p.add_argument("--family", help="family spec, e.g. complete:n=5 or erdos_renyi:n=8,p=0.5")
        p.add_argument("--seed", type=lambda s: int(s, 0), help="override the family seed")
        p.add_argument("--ell", type=int, help="vertex index (1-based) for per-vertex routes")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--tol", type=float, default=ROUND_RTOL, help="integer rounding tolerance")

    p = sub.add_parser("count", help="count spanning trees")
    graph_opts(p)
    p.add_argument("--route", choices=ROUTE_CHOICES, default="all")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bounds", help="upper bounds and their orderings")
    graph_opts(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run the property battery on a seeded corpus")
    p.add_argument("--count", type=int, default=200, help="simple random graphs")
    p.add_argument("--multigraphs", type=int, default=50)
    p.add_argument("--sizes", default="4..10", help="vertex counts, e.g. 4..10")
    p.add_argument("--p", default="0.3,0.5,0.8", help="comma-separated edge probabilities")
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--tol", type=float, default=ROUND_RTOL)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
