"""Spanning-tree counters.

One determinant route, five relative-entropy routes and an exact
deletion-contraction oracle. Every floating route returns a
:class:`CountResult` carrying the raw value and its integer reconciliation.

The entropy routes never check connectivity up front: a disconnected graph
makes the pinched state singular on the subspace the reference state lives
on, the relative entropy comes back ``+inf`` and the count is 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from treentropy.channels import pinch, projector_off
from treentropy.graphcore import (
    EdgelessGraphError,
    Multigraph,
    density_matrix,
    laplacian,
    volume,
)
from treentropy.specfun import det_sym, principal_submatrix, relative_entropy

ROUND_RTOL = 1e-6
DC_MAX_VERTICES = 12
DC_MAX_PAIRS = 66


class Route(str, Enum):
    determinant = "determinant"
    entropy_pi = "entropy_pi"
    entropy_pi_avg = "entropy_pi_avg"
    entropy_id = "entropy_id"
    entropy_id_avg = "entropy_id_avg"
    entropy_reduced = "entropy_reduced"
    deletion_contraction = "deletion_contraction"


class NumericalError(ArithmeticError):
    """A floating count is too far from any integer to be trusted."""


class IsolatedVertexError(ValueError):
    pass


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class CountResult:
    raw: float
    rounded: int
    route: Route
    residual: float

    def to_dict(self) -> dict:
        return {"route": self.route.value, "raw": self.raw, "rounded": self.rounded,
                "residual": self.residual}

    @classmethod
    def from_dict(cls, data: dict) -> "CountResult":
        return cls(float(data["raw"]), int(data["rounded"]), Route(data["route"]),
                   float(data["residual"]))


def round_count(raw: float, rtol: float = ROUND_RTOL) -> int:
    """Nearest nonnegative integer to ``raw``, refusing values off by more than ``rtol``.

    >>> round_count(2.9999999997)
    3
    """
    if not math.isfinite(raw):
        raise NumericalError(f"count evaluated to {raw!r}")
    if raw < -rtol:
        raise NumericalError(f"count evaluated to negative value {raw!r}")
    nearest = max(0, int(round(raw)))
    if abs(raw - nearest) > rtol * max(1, nearest):
        raise NumericalError(f"raw count {raw!r} is not within {rtol:g} (relative) of an integer")
    return nearest


def _result(raw: float, route: Route, rtol: float) -> CountResult:
    rounded = round_count(raw, rtol)
    return CountResult(float(raw), rounded, route, abs(raw - rounded))


def _check_ell(G: Multigraph, ell: int) -> None:
    if not 1 <= ell <= G.n:
        raise ValueError(f"vertex {ell} out of range 1..{G.n}")


def _needs_two_vertices(G: Multigraph) -> None:
    if G.n < 2:
        raise ValueError("entropy routes need n >= 2")


def tau_determinant(G: Multigraph, ell: int = 1, rtol: float = ROUND_RTOL) -> CountResult:
    _check_ell(G, ell)
    raw = det_sym(principal_submatrix(laplacian(G), ell))
    # LU round-off can leave a tiny negative on singular minors
    if raw < 0 and abs(raw) <= rtol:
        raw = 0.0
    return _result(raw, Route.determinant, rtol)


# -- entropy routes ---------------------------------------------------------

def _pinched_state(G: Multigraph, ell: int) -> np.ndarray:
    return pinch(density_matrix(G), ell)


def _entropy_subspace(G: Multigraph, ell: int) -> float:
    """``S(Pi_l/(n-1) || Phi_l(rho))``."""
    n = G.n
    return relative_entropy(projector_off(n, ell) / (n - 1), _pinched_state(G, ell))


def _entropy_full(G: Multigraph, ell: int) -> float:
    """``S(I/n || Phi_l(rho))``."""
    n = G.n
    return relative_entropy(np.eye(n) / n, _pinched_state(G, ell))


def _scaled_exp(log_prefactor: float, exponent: float) -> float:
    if math.isinf(exponent):
        return 0.0
    return math.exp(log_prefactor - exponent)


def tau_entropy_pi(G: Multigraph, ell: int = 1, rtol: float = ROUND_RTOL) -> CountResult:
    """``(d/(n-1))**(n-1) * exp(-(n-1) S(Pi_l/(n-1) || Phi_l(rho)))``."""
    _needs_two_vertices(G)
    _check_ell(G, ell)
    n, d = G.n, volume(G)
    s = _entropy_subspace(G, ell)
    raw = _scaled_exp((n - 1) * math.log(d / (n - 1)), (n - 1) * s)
    return _result(raw, Route.entropy_pi, rtol)


def tau_entropy_pi_avg(G: Multigraph, rtol: float = ROUND_RTOL) -> CountResult:
    _needs_two_vertices(G)
    n, d = G.n, volume(G)
    total = 0.0
    for ell in range(1, n + 1):
        total += _entropy_subspace(G, ell)
    raw = _scaled_exp((n - 1) * math.log(d / (n - 1)), (n - 1) / n * total)
    return _result(raw, Route.entropy_pi_avg, rtol)


def default_ell(G: Multigraph) -> int:
    """First vertex of maximum degree."""
    deg = G.degrees()
    return deg.index(max(deg)) + 1


def tau_entropy_id(G: Multigraph, ell: int | None = None, rtol: float = ROUND_RTOL) -> CountResult:
    """``(d/n)**n * exp(-n S(I/n || Phi_l(rho))) / Delta_l``; ``l`` must not be isolated."""
    _needs_two_vertices(G)
    if ell is None:
        ell = default_ell(G)
    _check_ell(G, ell)
    n, d = G.n, volume(G)
    if d == 0:
        raise EdgelessGraphError("edgeless graph has volume 0 and no density matrix")
    deg_ell = G.degrees()[ell - 1]
    if deg_ell == 0:
        raise IsolatedVertexError(
            f"vertex {ell} is isolated; pick a vertex with positive degree "
            f"(e.g. {default_ell(G)})"
        )
    s = _entropy_full(G, ell)
    raw = _scaled_exp(n * math.log(d / n) - math.log(deg_ell), n * s)
    return _result(raw, Route.entropy_id, rtol)


def tau_entropy_id_avg(G: Multigraph, rtol: float = ROUND_RTOL) -> CountResult:
    _needs_two_vertices(G)
    n, d = G.n, volume(G)
    deg = G.degrees()
    if min(deg) == 0:
        # det(Delta) = 0: an isolated vertex rules out every spanning tree
        return CountResult(0.0, 0, Route.entropy_id_avg, 0.0)
    total = 0.0
    for ell in range(1, n + 1):
        total += _entropy_full(G, ell)
    log_det_delta = sum(math.log(x) for x in deg)
    raw = _scaled_exp(n * math.log(d / n) - log_det_delta / n, total)
    return _result(raw, Route.entropy_id_avg, rtol)


def reduced_state(G: Multigraph, ell: int) -> np.ndarray:
    """``Pi_l L Pi_l / (d - Delta_l)``, kept n x n with a zero row and column."""
    _check_ell(G, ell)
    L = laplacian(G)
    P = projector_off(G.n, ell)
    trace = volume(G) - G.degrees()[ell - 1]
    if trace == 0:
        raise EdgelessGraphError("edgeless graph: the reduced Laplacian is zero")
    return P @ L @ P / trace


def tau_entropy_reduced(G: Multigraph, ell: int = 1, rtol: float = ROUND_RTOL) -> CountResult:
    """``((d - Delta_l)/(n-1))**(n-1) * exp(-(n-1) S(Pi_l/(n-1) || rho'_l))``."""
    _needs_two_vertices(G)
    n = G.n
    rho_red = reduced_state(G, ell)
    trace = volume(G) - G.degrees()[ell - 1]
    s = relative_entropy(projector_off(n, ell) / (n - 1), rho_red)
    raw = _scaled_exp((n - 1) * math.log(trace / (n - 1)), (n - 1) * s)
    return _result(raw, Route.entropy_reduced, rtol)


# -- deletion-contraction oracle -------------------------------------------

def tau_deletion_contraction(G: Multigraph, max_vertices: int = DC_MAX_VERTICES,
                             max_pairs: int = DC_MAX_PAIRS) -> CountResult:
    """Exact count from ``tau(G) = tau(G - e) + tau(G / e)``.

    A pair carrying ``m`` parallel edges is handled in one step:
    ``tau(G) = tau(G - all m copies) + m * tau(G / pair)``; the remaining
    copies become loops under contraction and are dropped. Vertices with a
    single neighbour are peeled off first, and subresults are memoized on the
    relabelled sorted edge list. The cap counts adjacent vertex pairs, not
    parallel copies, since the work grows with the former only.
    """
    if G.n > max_vertices or len(G.edges) > max_pairs:
        raise CapExceededError(
            f"deletion-contraction capped at n <= {max_vertices} and <= {max_pairs} "
            f"adjacent pairs (got n={G.n}, {len(G.edges)} pairs)"
        )
    edges = {(i - 1, j - 1): m for (i, j), m in G.edges.items()}
    value = _dc_count(G.n, _canonical(edges), {})
    return CountResult(float(value), value, Route.deletion_contraction, 0.0)


def _canonical(edges: dict) -> tuple:
    return tuple(sorted(edges.items()))


def _relabel(n: int, edges: dict, removed: int) -> dict:
    """Drop vertex ``removed`` and shift higher labels down by one."""
    out = {}
    for (a, b), m in edges.items():
        a2 = a - (a > removed)
        b2 = b - (b > removed)
        out[(a2, b2)] = m
    return out


def _dc_count(n: int, key: tuple, memo: dict) -> int:
    if n == 1:
        return 1
    if not key:
        return 0
    memo_key = (n, key)
    cached = memo.get(memo_key)
    if cached is not None:
        return cached

    edges = dict(key)
    adj: list[dict[int, int]] = [dict() for _ in range(n)]
    for (a, b), m in edges.items():
        adj[a][b] = m
        adj[b][a] = m

    if not _dc_connected(n, adj):
        memo[memo_key] = 0
        return 0

    # a vertex with one neighbour: every spanning tree uses exactly one of its m edges
    factor = 1
    while n > 1:
        leaf = next((v for v in range(n) if len(adj[v]) == 1), None)
        if leaf is None:
            break
        (nbr, m), = adj[leaf].items()
        factor *= m
        edges = {e: k for e, k in edges.items() if leaf not in e}
        edges = _relabel(n, edges, leaf)
        n -= 1
        adj = [dict() for _ in range(n)]
        for (a, b), k in edges.items():
            adj[a][b] = k
            adj[b][a] = k
    if n == 1:
        memo[memo_key] = factor
        return factor

    # branch on an edge at a vertex of minimum neighbourhood
    u = min(range(n), key=lambda v: len(adj[v]))
    v = min(adj[u])
    m = adj[u][v]
    a, b = (u, v) if u < v else (v, u)

    deleted = {e: k for e, k in edges.items() if e != (a, b)}

    # contract b into a; parallel edges created by the merge accumulate
    contracted: dict[tuple[int, int], int] = {}
    for (x, y), k in deleted.items():
        x = a if x == b else x
        y = a if y == b else y
        if x == y:
            continue
        e = (x, y) if x < y else (y, x)
        contracted[e] = contracted.get(e, 0) + k
    contracted = _relabel(n, contracted, b)

    result = factor * (
        _dc_count(n, _canonical(deleted), memo)
        + m * _dc_count(n - 1, _canonical(contracted), memo)
    )
    memo[memo_key] = result
    return result


def _dc_connected(n: int, adj) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n
