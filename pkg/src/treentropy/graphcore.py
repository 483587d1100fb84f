"""Multigraph data model and the matrices built from it.

Vertices are 1-based everywhere a caller can see them. Edge multiplicities
are kept as Python integers; floating point only appears once a matrix is
requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

SYMMETRY_RTOL = 1e-12
DENSITY_TOL = 1e-10


class GraphError(ValueError):
    """Invalid graph construction input."""


class EdgelessGraphError(ValueError):
    """Raised when a graph has volume zero and so no density matrix."""


@dataclass(frozen=True)
class Multigraph:
    """Undirected loopless multigraph on vertices ``1..n``.

    ``edges`` maps a sorted pair ``(i, j)`` with ``i < j`` to its multiplicity.
    Use :func:`from_edge_list` rather than calling the constructor directly.
    """

    n: int
    edges: Mapping[tuple[int, int], int]

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        for (i, j), m in self.edges.items():
            if not i < j:
                raise GraphError(f"edge key {(i, j)} must be a sorted pair with i < j")
            if i < 1 or j > self.n:
                raise GraphError(f"edge {(i, j)} has an endpoint outside 1..{self.n}")
            if m < 1:
                raise GraphError(f"edge {(i, j)} has non-positive multiplicity {m}")
        # freeze a sorted copy so equal graphs compare and hash equal
        object.__setattr__(self, "edges", _FrozenEdges(sorted(self.edges.items())))

    def multiplicity(self, i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        return self.edges.get(key, 0)

    def edge_list(self) -> list[tuple[int, int, int]]:
        return [(i, j, m) for (i, j), m in self.edges.items()]

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(self.edges.values())

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for (i, j), m in self.edges.items():
            deg[i - 1] += m
            deg[j - 1] += m
        return deg


class _FrozenEdges(Mapping):
    __slots__ = ("_items", "_lookup")

    def __init__(self, items):
        self._items = tuple(items)
        self._lookup = dict(self._items)

    def __getitem__(self, key):
        return self._lookup[key]

    def __iter__(self) -> Iterator:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, _FrozenEdges):
            return self._items == other._items
        return dict(self._items) == other

    def __repr__(self) -> str:
        return f"{dict(self._items)!r}"


def from_edge_list(n: int, items: Iterable[tuple]) -> Multigraph:
    """Build a multigraph from ``(i, j)`` or ``(i, j, mult)`` tuples.

    Repeated pairs accumulate their multiplicities.

    >>> from_edge_list(3, [(1, 2, 2), (2, 1, 1)]).multiplicity(1, 2)
    3
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise GraphError(f"vertex count must be a positive integer, got {n!r}")
    edges: dict[tuple[int, int], int] = {}
    for item in items:
        if len(item) == 2:
            i, j = item
            m = 1
        elif len(item) == 3:
            i, j, m = item
        else:
            raise GraphError(f"edge item must be (i, j) or (i, j, mult), got {item!r}")
        i, j, m = int(i), int(j), int(m)
        if i == j:
            raise GraphError(f"self-loop at vertex {i}")
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphError(f"edge {(i, j)} has an endpoint outside 1..{n}")
        if m < 1:
            raise GraphError(f"edge {(i, j)} has non-positive multiplicity {m}")
        key = (i, j) if i < j else (j, i)
        edges[key] = edges.get(key, 0) + m
    return Multigraph(int(n), edges)


def volume(G: Multigraph) -> int:
    """Sum of degrees, i.e. twice the edge count with multiplicity."""
    return 2 * G.edge_count


def degree_matrix(G: Multigraph) -> np.ndarray:
    return np.diag(np.array(G.degrees(), dtype=float))


def adjacency_matrix(G: Multigraph) -> np.ndarray:
    A = np.zeros((G.n, G.n))
    for (i, j), m in G.edges.items():
        A[i - 1, j - 1] = A[j - 1, i - 1] = m
    return A


def laplacian(G: Multigraph) -> np.ndarray:
    return degree_matrix(G) - adjacency_matrix(G)


def laplacian_int(G: Multigraph) -> list[list[int]]:
    """Laplacian as nested lists of Python ints, for exact arithmetic."""
    L = [[0] * G.n for _ in range(G.n)]
    for (i, j), m in G.edges.items():
        a, b = i - 1, j - 1
        L[a][a] += m
        L[b][b] += m
        L[a][b] -= m
        L[b][a] -= m
    return L


def density_matrix(G: Multigraph) -> np.ndarray:
    """Normalized Laplacian state ``L / vol(G)``."""
    d = volume(G)
    if d == 0:
        raise EdgelessGraphError("edgeless graph has volume 0 and no density matrix")
    return laplacian(G) / d


def check_symmetric(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a float array, raising if it is not square and symmetric."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if M.size and np.max(np.abs(M - M.T)) > SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} is not symmetric")
    return M


def check_density(M, name: str = "density matrix") -> np.ndarray:
    """Validate a real density matrix: symmetric, unit trace, PSD."""
    M = check_symmetric(M, name)
    tr = float(np.trace(M))
    if abs(tr - 1.0) > DENSITY_TOL:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    w = np.linalg.eigvalsh(M)
    if w[0] < -DENSITY_TOL * max(float(w[-1]), 0.0) - 1e-15:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    return M
