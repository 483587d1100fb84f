"""Property battery run by ``treentropy verify``.

Each family walks the corpus and stops at its first counterexample, which is
returned serialized in graph-file format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from treentropy import channels
from treentropy.bounds import bound_quadratic, bound_suite, lower_detL, quadratic_trace
from treentropy.gen import SplitMix64, connected, corpus, generate
from treentropy.graphcore import (
    Multigraph,
    degree_matrix,
    density_matrix,
    from_edge_list,
    volume,
)
from treentropy.report import counts_agree, format_graph, run_routes
from treentropy.specfun import relative_entropy
from treentropy.treecount import ROUND_RTOL, Route, tau_entropy_id_avg

ALL_ROUTES = tuple(Route)
ENTROPY_ROUTES = (Route.entropy_pi, Route.entropy_pi_avg, Route.entropy_id,
                  Route.entropy_id_avg, Route.entropy_reduced)


@dataclass
class FamilyResult:
    name: str
    checks: int = 0
    failure: str | None = None
    graph: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None

    def fail(self, message: str, G: Multigraph | None = None) -> "FamilyResult":
        self.failure = message
        self.graph = None if G is None else format_graph(G)
        return self


def check_route_agreement(graphs, rtol: float = ROUND_RTOL) -> FamilyResult:
    res = FamilyResult("route_agreement")
    for label, G in graphs:
        outcomes = run_routes(G, ALL_ROUTES, rtol=rtol)
        results = [o.result for o in outcomes if o.result is not None]
        by_route = {o.route: o for o in outcomes}
        if by_route[Route.deletion_contraction].result is None:
            return res.fail(f"{label}: oracle skipped", G)
        if not counts_agree(results, rtol):
            got = {o.route.value: o.result.rounded for o in outcomes if o.result}
            return res.fail(f"{label}: routes disagree {got}", G)
        for route in ENTROPY_ROUTES:
            r = by_route[route].result
            if r is None:
                if volume(G) != 0:
                    return res.fail(f"{label}: {route.value} skipped: "
                                    f"{by_route[route].skipped}", G)
                continue
            if r.residual > rtol * max(1, r.rounded):
                return res.fail(f"{label}: {route.value} raw {r.raw!r} off integer", G)
        res.checks += 1
    return res


def check_orderings(graphs) -> FamilyResult:
    res = FamilyResult("orderings")
    for label, G in graphs:
        if min(G.degrees()) == 0:
            continue
        report = bound_suite(G)
        for o in report.orderings:
            if o.asserted and not o.holds:
                return res.fail(f"{label}: {o.name} violated (slack {o.slack:.3e})", G)
        res.checks += 1
    return res


def check_channel_identities(graphs) -> FamilyResult:
    res = FamilyResult("channel_identities")
    for label, G in graphs:
        if volume(G) == 0:
            continue
        n, d = G.n, volume(G)
        rho = density_matrix(G)
        if np.max(np.abs(channels.averaged_pinch(rho) - channels.averaged_pinch_literal(rho))) > 1e-14:
            return res.fail(f"{label}: averaged pinch entrywise form", G)
        it = rho
        for k in range(1, 21):
            it = channels.averaged_pinch_literal(it)
            if np.max(np.abs(channels.averaged_pinch_power(rho, k) - it)) > 1e-12:
                return res.fail(f"{label}: power closed form at k={k}", G)
        if n >= 3:
            gap = np.max(np.abs(channels.averaged_pinch_power(rho, 200) - degree_matrix(G) / d))
            if gap > 1e-8:
                return res.fail(f"{label}: Psi^200 gap {gap:.3e}", G)
        sigma = channels.sigma_state(G)
        if (np.max(np.abs(sigma - channels.sigma_state_alt(G))) > 1e-12
                or np.max(np.abs(sigma - channels.averaged_pinch_literal(rho))) > 1e-12):
            return res.fail(f"{label}: sigma closed forms", G)
        for ell in range(1, n + 1):
            for ell2 in range(1, n + 1):
                a = channels.pinch(channels.pinch(rho, ell), ell2)
                b = channels.pinch(channels.pinch(rho, ell2), ell)
                if not np.array_equal(a, b):
                    return res.fail(f"{label}: pinch {ell},{ell2} do not commute", G)
        res.checks += 1
    return res


def random_density(n: int, rng: SplitMix64, full_rank: bool = True) -> np.ndarray:
    """Wishart-style random state ``X X^T / Tr`` from a SplitMix64 stream."""
    X = np.array([[2.0 * rng.random() - 1.0 for _ in range(n)] for _ in range(n)])
    M = X @ X.T
    if full_rank:
        M += 0.05 * np.eye(n)
    M = (M + M.T) / 2
    return M / np.trace(M)


def check_entropy_identities(graphs, seed: int = 42, samples: int = 100) -> FamilyResult:
    res = FamilyResult("entropy_identities")
    rng = SplitMix64(seed)
    for idx in range(samples):
        n = 2 + idx % 9
        M = random_density(n, rng)
        lhs = math.exp(-relative_entropy(np.eye(n) / n, M))
        rhs = n * np.linalg.det(M) ** (1.0 / n)
        if abs(lhs - rhs) > 1e-9 * abs(rhs):
            return res.fail(f"log identity sample {idx}: {lhs!r} vs {rhs!r}")
        N = random_density(n, rng)
        if relative_entropy(M, N) < 0:
            return res.fail(f"Klein inequality sample {idx}")
        res.checks += 1
    for label, G in graphs:
        if not connected(G) or G.n < 2:
            continue
        n = G.n
        rho = density_matrix(G)
        mixed = np.eye(n) / n
        s_rho = relative_entropy(mixed, rho)
        for ell in range(1, n + 1):
            pinched = channels.pinch(rho, ell)
            s_pinch = relative_entropy(mixed, pinched)
            if not s_pinch <= s_rho + 1e-9:
                return res.fail(f"{label}: monotonicity under pinch {ell}", G)
            if relative_entropy(mixed, channels.averaged_pinch(pinched)) > s_pinch + 1e-9:
                return res.fail(f"{label}: monotonicity under averaged pinch", G)
            diff = mixed - pinched
            if abs(float(np.sum(diff * diff)) - quadratic_trace(G, ell)) > 1e-10:
                return res.fail(f"{label}: quadratic trace closed form, l={ell}", G)
        bound, _ = bound_quadratic(G)
        if bound > bound_suite(G, with_orderings=False).tau_exact * (1 + 1e-9):
            return res.fail(f"{label}: quadratic lower bound exceeds tau", G)
        res.checks += 1
    return res


def check_degenerate(graphs) -> FamilyResult:
    res = FamilyResult("degenerate_cases")
    extra = [("two_triangles", _disjoint_union_example()),
             ("triangle_plus_isolated", _isolated_vertex_example())]
    for label, G in list(graphs) + extra:
        deg = G.degrees()
        if not connected(G):
            outcomes = run_routes(G, ALL_ROUTES)
            bad = {o.route.value: o.result.rounded for o in outcomes
                   if o.result is not None and o.result.rounded != 0}
            if bad:
                return res.fail(f"{label}: disconnected graph counted {bad}", G)
            if min(deg) == 0 and G.n >= 2 and tau_entropy_id_avg(G).rounded != 0:
                return res.fail(f"{label}: isolated vertex not caught", G)
        if min(deg) > 0 and abs(lower_detL(G)) > 1e-6:
            return res.fail(f"{label}: det(L)/delta_min not 0", G)
        res.checks += 1
    return res


def _disjoint_union_example() -> Multigraph:
    return from_edge_list(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)])


def _isolated_vertex_example() -> Multigraph:
    return from_edge_list(4, [(1, 2), (2, 3), (1, 3)])


def run_battery(count: int = 200, multigraphs: int = 50, sizes=range(4, 11),
                ps=(0.3, 0.5, 0.8), seed: int = 42, rtol: float = ROUND_RTOL) -> list[FamilyResult]:
    specs = corpus(count=count, sizes=sizes, ps=ps, seed=seed, multigraphs=multigraphs)
    graphs = [(s.label(), generate(s)) for s in specs]
    return [
        check_route_agreement(graphs, rtol),
        check_orderings(graphs),
        check_channel_identities(graphs),
        check_entropy_identities(graphs, seed=seed),
        check_degenerate(graphs),
    ]
