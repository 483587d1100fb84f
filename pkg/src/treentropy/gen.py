"""Deterministic graph families and seeded random graphs.

Random graphs use SplitMix64 so a (family, params, seed) triple names the
same graph on every platform and in every language:

    state  <- state + 0x9E3779B97F4A7C15              (mod 2**64)
    z      <- state
    z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9    (mod 2**64)
    z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB    (mod 2**64)
    output  z ^ (z >> 31)

A uniform float in [0, 1) is ``(output >> 11) * 2**-53``.

``erdos_renyi`` visits pairs ``(i, j)``, ``1 <= i < j <= n``, in
lexicographic order and draws one float per pair; the pair becomes an edge
when the float is ``< p``. With ``k > 1`` every accepted pair draws one more
word and gets multiplicity ``1 + word % k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from treentropy.graphcore import GraphError, Multigraph, from_edge_list

MASK64 = (1 << 64) - 1
FAMILIES = ("complete", "star", "multistar", "cycle", "path", "erdos_renyi", "paper_example")


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int = 4
    k: int = 1
    p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GraphError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise GraphError(f"n must be >= 1, got {self.n}")
        if self.family == "multistar" and self.n < 2:
            raise GraphError("multistar needs n >= 2")
        if self.k < 1:
            raise GraphError(f"k must be >= 1, got {self.k}")
        if not 0.0 <= self.p <= 1.0:
            raise GraphError(f"p must lie in [0, 1], got {self.p}")
        if self.family == "cycle" and self.n < 3:
            raise GraphError("cycle needs n >= 3")
        if not 0 <= self.seed <= MASK64:
            raise GraphError("seed must be a 64-bit unsigned integer")

    def label(self) -> str:
        if self.family == "paper_example":
            return "paper_example"
        parts = [f"n={self.n}"]
        if self.family == "multistar" or (self.family == "erdos_renyi" and self.k > 1):
            parts.append(f"k={self.k}")
        if self.family == "erdos_renyi":
            parts += [f"p={self.p}", f"seed={self.seed}"]
        return f"{self.family}:{','.join(parts)}"


def parse_family(text: str) -> FamilySpec:
    """Parse ``family:key=value,...``, e.g. ``multistar:n=5,k=4``."""
    family, _, rest = text.strip().partition(":")
    kwargs = {}
    for part in filter(None, rest.split(",")):
        key, eq, value = part.partition("=")
        key = key.strip()
        if not eq or key not in ("n", "k", "p", "seed"):
            raise GraphError(f"bad family parameter {part!r} in {text!r}")
        try:
            kwargs[key] = float(value) if key == "p" else int(value, 0)
        except ValueError:
            raise GraphError(f"bad value for {key!r} in {text!r}") from None
    return FamilySpec(family.strip(), **kwargs)


def generate(spec: FamilySpec) -> Multigraph:
    n, k = spec.n, spec.k
    fam = spec.family
    if fam == "complete":
        return from_edge_list(n, combinations(range(1, n + 1), 2))
    if fam == "star":
        return from_edge_list(n, [(1, j) for j in range(2, n + 1)])
    if fam == "multistar":
        # center 1; the pair {1, 2} carries all k parallel edges
        return from_edge_list(n, [(1, 2, k)] + [(1, j) for j in range(3, n + 1)])
    if fam == "cycle":
        return from_edge_list(n, [(i, i % n + 1) for i in range(1, n + 1)])
    if fam == "path":
        return from_edge_list(n, [(i, i + 1) for i in range(1, n)])
    if fam == "paper_example":
        return from_edge_list(4, [(1, 2), (2, 3), (3, 4), (2, 4)])
    rng = SplitMix64(spec.seed)
    edges = []
    for i, j in combinations(range(1, n + 1), 2):
        if rng.random() < spec.p:
            mult = 1 + rng.next_u64() % k if k > 1 else 1
            edges.append((i, j, mult))
    return from_edge_list(n, edges)


def connected(G: Multigraph) -> bool:
    parent = list(range(G.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = G.n
    for i, j in G.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            components -= 1
    return components == 1


def corpus(count: int = 200, sizes=range(4, 11), ps=(0.3, 0.5, 0.8), seed: int = 42,
           multigraphs: int = 50, max_mult: int = 3) -> list[FamilySpec]:
    """Seeded Erdos-Renyi corpus: ``count`` simple graphs then ``multigraphs`` multigraphs.

    Per-graph seeds come from a SplitMix64 stream keyed by ``seed``; sizes and
    edge probabilities cycle through ``sizes`` and ``ps`` by graph index.
    """
    sizes, ps = list(sizes), list(ps)
    master = SplitMix64(seed)
    specs = []
    for idx in range(count + multigraphs):
        n = sizes[idx % len(sizes)]
        p = ps[(idx // len(sizes)) % len(ps)]
        k = max_mult if idx >= count else 1
        specs.append(FamilySpec("erdos_renyi", n=n, k=k, p=p, seed=master.next_u64()))
    return specs
