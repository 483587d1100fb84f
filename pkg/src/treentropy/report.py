"""Graph file format, route runner and the JSON report schema.

Graph files are UTF-8 text::

    # comment
    4 4          <- n m
    1 2          <- i j [mult], 1-based, m such lines
    2 3 2

JSON reports carry ``schema_version``; see README for the field list.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

from treentropy.bounds import BoundReport
from treentropy.graphcore import EdgelessGraphError, GraphError, Multigraph, from_edge_list, volume
from treentropy.treecount import (
    ROUND_RTOL,
    CapExceededError,
    CountResult,
    IsolatedVertexError,
    Route,
    default_ell,
    tau_deletion_contraction,
    tau_determinant,
    tau_entropy_id,
    tau_entropy_id_avg,
    tau_entropy_pi,
    tau_entropy_pi_avg,
    tau_entropy_reduced,
)

SCHEMA_VERSION = 1
EXACT_FLOAT_LIMIT = 2**53

ROUTE_ALIASES = {"dc": Route.deletion_contraction}
ROUTES_WITH_ELL = {Route.determinant, Route.entropy_pi, Route.entropy_id, Route.entropy_reduced}
# preconditions that make a route inapplicable rather than wrong
SKIP_ERRORS = (EdgelessGraphError, IsolatedVertexError, CapExceededError)


def parse_route(name: str) -> Route:
    if name in ROUTE_ALIASES:
        return ROUTE_ALIASES[name]
    return Route(name)


# -- graph files ------------------------------------------------------------

def parse_graph_text(text: str) -> Multigraph:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError("graph file is empty")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphError(f"header must be two integers, got {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edge lines, found {len(body)}")
    items = []
    for line in body:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"edge line must be 'i j [mult]', got {line!r}")
        try:
            items.append(tuple(int(p) for p in parts))
        except ValueError:
            raise GraphError(f"non-integer field in edge line {line!r}") from None
    return from_edge_list(n, items)


def read_graph_file(path: str) -> Multigraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def format_graph(G: Multigraph) -> str:
    out = [f"{G.n} {len(G.edges)}"]
    for i, j, m in G.edge_list():
        out.append(f"{i} {j}" if m == 1 else f"{i} {j} {m}")
    return "\n".join(out) + "\n"


# -- running routes ---------------------------------------------------------

@dataclass
class RouteOutcome:
    route: Route
    result: CountResult | None = None
    skipped: str | None = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        data = {"route": self.route.value, "seconds": self.seconds}
        if self.result is not None:
            data.update(self.result.to_dict())
        else:
            data["skipped"] = self.skipped
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "RouteOutcome":
        result = None if "skipped" in data else CountResult.from_dict(data)
        return cls(Route(data["route"]), result, data.get("skipped"), float(data["seconds"]))


def _call(route: Route, G: Multigraph, ell: int | None, rtol: float) -> CountResult:
    if route is Route.determinant:
        return tau_determinant(G, ell or 1, rtol)
    if route is Route.entropy_pi:
        return tau_entropy_pi(G, ell or 1, rtol)
    if route is Route.entropy_pi_avg:
        return tau_entropy_pi_avg(G, rtol)
    if route is Route.entropy_id:
        return tau_entropy_id(G, ell, rtol)
    if route is Route.entropy_id_avg:
        return tau_entropy_id_avg(G, rtol)
    if route is Route.entropy_reduced:
        return tau_entropy_reduced(G, ell or 1, rtol)
    return tau_deletion_contraction(G)


def run_routes(G: Multigraph, routes, ell: int | None = None,
               rtol: float = ROUND_RTOL) -> list[RouteOutcome]:
    """Evaluate each route; precondition failures become skip records.

    Entropy routes also need ``n >= 2``. Numerical failures propagate.
    """
    outcomes = []
    for route in routes:
        start = time.perf_counter()
        try:
            if G.n < 2 and route not in (Route.determinant, Route.deletion_contraction):
                raise EdgelessGraphError("entropy routes need n >= 2")
            r_ell = ell
            if r_ell is None and route is Route.entropy_id and volume(G):
                r_ell = default_ell(G)
            result = _call(route, G, r_ell, rtol)
            outcomes.append(RouteOutcome(route, result, seconds=time.perf_counter() - start))
        except SKIP_ERRORS as exc:
            outcomes.append(RouteOutcome(route, skipped=str(exc),
                                         seconds=time.perf_counter() - start))
    return outcomes


def counts_agree(results, rtol: float = ROUND_RTOL) -> bool:
    """True when all results name the same count.

    Below ``2**53`` the rounded integers must match exactly. Above it a float
    no longer pins down an integer, so raw values are compared at ``rtol``.
    """
    results = [r for r in results if r is not None]
    if len(results) < 2:
        return True
    if all(r.rounded < EXACT_FLOAT_LIMIT for r in results):
        return len({r.rounded for r in results}) == 1
    return all(math.isclose(r.raw, results[0].raw, rel_tol=rtol) for r in results)


# -- report ----------------------------------------------------------------

@dataclass
class Report:
    source: str
    n: int
    volume: int
    degrees: list[int]
    routes: list[RouteOutcome] = field(default_factory=list)
    tau: int | None = None
    agree: bool = True
    bounds: BoundReport | None = None
    quadratic: dict | None = None
    timing: dict[str, float] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "graph": {"source": self.source, "n": self.n, "volume": self.volume,
                      "degrees": list(self.degrees)},
            "routes": [o.to_dict() for o in self.routes],
            "tau": self.tau,
            "agree": self.agree,
            "bounds": None if self.bounds is None else self.bounds.to_dict(),
            "quadratic": self.quadratic,
            "timing": dict(self.timing),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {data.get('schema_version')!r}")
        g = data["graph"]
        return cls(
            source=g["source"], n=g["n"], volume=g["volume"], degrees=list(g["degrees"]),
            routes=[RouteOutcome.from_dict(o) for o in data["routes"]],
            tau=data["tau"], agree=data["agree"],
            bounds=None if data["bounds"] is None else BoundReport.from_dict(data["bounds"]),
            quadratic=data["quadratic"], timing=dict(data["timing"]),
        )


def new_report(G: Multigraph, source: str) -> Report:
    return Report(source=source, n=G.n, volume=volume(G), degrees=G.degrees())


def timed(report: Report, stage: str, fn: Callable, *args, **kwargs):
    start = time.perf_counter()
    try:
        return fn(*args, **kwargs)
    finally:
        report.timing[stage] = time.perf_counter() - start
