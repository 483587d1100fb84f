"""Degree-based upper bounds on the number of spanning trees.

All the closed-form bounds depend on the degree sequence only:

    tau_0       det(D) / D_max
    tau_A       det(D) ** (1 - 1/n)
    tau_B       (Tr D / n) ** (n - 1)
    tau_C       (Tr D / n) ** n / det(D) ** (1/n)
    tau_D       (Tr D / n) ** n / D_max
    tau_E       ((Tr D - D_max) / (n - 1)) ** (n - 1)
    tau_F       (n / (n - 1)) ** (n - 1) * det(D) ** (1 - 1/n)
    tau_trivial binomial(|E|, n - 1)

plus ``tau_sigma = det(D - (n-2)/n A) / det(D) ** (1/n)``, which still needs
one determinant. Products of degrees are taken in log space so that
``n`` in the hundreds does not overflow before the final exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from treentropy.channels import pinch
from treentropy.graphcore import (
    Multigraph,
    adjacency_matrix,
    degree_matrix,
    density_matrix,
    laplacian,
    laplacian_int,
    volume,
)
from treentropy.gen import connected
from treentropy.specfun import det_int, spectral_decompose, zero_threshold
from treentropy.treecount import IsolatedVertexError

ORDER_RTOL = 1e-9
SOUND_RTOL = 1e-6

UPPER_FIELDS = ("tau0", "tauA", "tauB", "tauC", "tauD", "tauE", "tauF", "tau_trivial", "tau_sigma")

# (name, smaller, larger); each must satisfy smaller <= larger
CHAINS = (
    ("tau0<=tauA", "tau0", "tauA"),
    ("tauA<=tauB", "tauA", "tauB"),
    ("tauB<=tauC", "tauB", "tauC"),
    ("tau0<=tauD", "tau0", "tauD"),
    ("tauD<=tauB", "tauD", "tauB"),
    ("tauD<=tauC", "tauD", "tauC"),
    ("tau0<=tauE", "tau0", "tauE"),
    ("tauE<=tauB", "tauE", "tauB"),
    ("tauA<=tauF", "tauA", "tauF"),
)


class DegenerateGraphError(ValueError):
    pass


@dataclass(frozen=True)
class Ordering:
    name: str
    holds: bool
    slack: float
    asserted: bool = True


@dataclass
class BoundReport:
    n: int
    tau_exact: int
    tau0: float
    tauA: float
    tauB: float
    tauC: float
    tauD: float
    tauE: float
    tauF: float
    tau_trivial: int
    tau_sigma: float
    lower_detL: float | None
    degenerate: bool = False
    orderings: list[Ordering] = field(default_factory=list)

    def upper_bounds(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in UPPER_FIELDS}

    def tight(self) -> list[str]:
        """Names of upper bounds that equal the exact count."""
        return [name for name, v in self.upper_bounds().items()
                if abs(v - self.tau_exact) <= SOUND_RTOL * max(1, self.tau_exact)]

    def to_dict(self) -> dict:
        data = asdict(self)
        data["orderings"] = [asdict(o) for o in self.orderings]
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "BoundReport":
        data = dict(data)
        data["orderings"] = [Ordering(**o) for o in data.get("orderings", [])]
        return cls(**data)


def _relative_slack(small: float, large: float) -> float:
    return (large - small) / max(1.0, abs(large))


def tau_exact(G: Multigraph) -> int:
    """Exact Matrix-Tree count via integer elimination on the first minor."""
    L = laplacian_int(G)
    return det_int([row[1:] for row in L[1:]])


def bound_suite(G: Multigraph, with_orderings: bool = True) -> BoundReport:
    n = G.n
    if n < 2:
        raise ValueError("bounds need n >= 2")
    deg = G.degrees()
    d = volume(G)
    d_max = max(deg)
    mean = d / n
    degenerate = min(deg) == 0

    tauB = mean ** (n - 1)
    tauD = mean**n / d_max if d_max else 0.0
    tauE = ((d - d_max) / (n - 1)) ** (n - 1)
    tau_trivial = math.comb(d // 2, n - 1)

    if degenerate:
        tau0 = tauA = tauC = tauF = tau_sigma = 0.0
    else:
        log_det = sum(math.log(x) for x in deg)
        tau0 = math.exp(log_det - math.log(d_max))
        tauA = math.exp((1 - 1 / n) * log_det)
        tauC = math.exp(n * math.log(mean) - log_det / n)
        tauF = math.exp((n - 1) * math.log(n / (n - 1)) + (1 - 1 / n) * log_det)
        tau_sigma = sigma_bound(G)

    report = BoundReport(
        n=n,
        tau_exact=tau_exact(G),
        tau0=tau0, tauA=tauA, tauB=tauB, tauC=tauC, tauD=tauD, tauE=tauE, tauF=tauF,
        tau_trivial=tau_trivial,
        tau_sigma=tau_sigma,
        lower_detL=None if degenerate else lower_detL(G),
        degenerate=degenerate,
    )
    if with_orderings and not degenerate:
        report.orderings = ordering_check(report)
    return report


def sigma_bound(G: Multigraph) -> float:
    """``det(D - (n-2)/n A) / det(D) ** (1/n)``, the bound from the averaged state."""
    n = G.n
    deg = G.degrees()
    if min(deg) == 0:
        return 0.0
    M = degree_matrix(G) - ((n - 2) / n) * adjacency_matrix(G)
    sign, logabs = np.linalg.slogdet(M)
    log_det_delta = sum(math.log(x) for x in deg)
    return float(sign) * math.exp(float(logabs) - log_det_delta / n)


def sigma_bound_alt(G: Multigraph) -> float:
    """Same bound written as ``det(L + 2A/n) / det(D) ** (1/n)``."""
    n = G.n
    deg = G.degrees()
    if min(deg) == 0:
        return 0.0
    M = laplacian(G) + (2.0 / n) * adjacency_matrix(G)
    sign, logabs = np.linalg.slogdet(M)
    return float(sign) * math.exp(float(logabs) - sum(math.log(x) for x in deg) / n)


def ordering_check(report: BoundReport) -> list[Ordering]:
    """Check the proven chains between bounds, plus soundness against ``tau_exact``.

    Slack is ``(larger - smaller) / max(1, |larger|)``; a chain holds when the
    slack is at least ``-1e-9``. The pair (tau_A, tau_D) has no fixed order and
    is reported with ``asserted=False``.
    """
    out = []
    for name, lo, hi in CHAINS:
        slack = _relative_slack(getattr(report, lo), getattr(report, hi))
        out.append(Ordering(name, slack >= -ORDER_RTOL, slack))

    # det(D) / (Tr D / n) ** n <= 1 is the same statement as tau_A <= tau_C
    ratio = report.tauA / report.tauC if report.tauC else 0.0
    out.append(Ordering("detD/(TrD/n)^n<=1", ratio <= 1 + ORDER_RTOL, 1.0 - ratio))

    for name, value in report.upper_bounds().items():
        slack = _relative_slack(report.tau_exact, value)
        out.append(Ordering(f"tau<={name}", slack >= -SOUND_RTOL, slack))

    ad = _relative_slack(report.tauA, report.tauD)
    out.append(Ordering("tauA<=tauD", ad >= 0, ad, asserted=False))
    return out


def quadratic_trace(G: Multigraph, ell: int) -> float:
    """Closed form of ``Tr((I/n - Phi_l(rho))**2)``.

    For simple graphs this is ``-1/n + (Tr(D^2) + Tr(D) - 2 D_l) / d^2``. With
    parallel edges the off-diagonal mass is the sum of squared multiplicities
    rather than the degree sum, so both off-diagonal terms use ``m**2``.
    """
    n, d = G.n, volume(G)
    deg = G.degrees()
    off = sum(2 * m * m for m in G.edges.values())
    off_ell = sum(2 * m * m for (i, j), m in G.edges.items() if ell in (i, j))
    return -1.0 / n + (sum(x * x for x in deg) + off - off_ell) / d**2


def bound_quadratic(G: Multigraph, ell: int | None = None) -> tuple[float, float]:
    """Lower bound on tau from ``S(r1||r2) <= Tr((r1 - r2)^2) / lambda_min(r2)``.

    Experimental; the bound is very weak in practice. Returns
    ``(lower_bound, trace_value)`` and checks the closed-form trace against a
    direct computation.
    """
    n = G.n
    deg = G.degrees()
    if ell is None:
        ell = deg.index(max(deg)) + 1
    if not 1 <= ell <= n:
        raise ValueError(f"vertex {ell} out of range 1..{n}")
    if deg[ell - 1] == 0:
        raise IsolatedVertexError(f"vertex {ell} is isolated")
    if not connected(G):
        raise DegenerateGraphError("quadratic bound needs a connected graph")

    d = volume(G)
    state = pinch(density_matrix(G), ell)
    diff = np.eye(n) / n - state
    direct = float(np.sum(diff * diff))
    closed = quadratic_trace(G, ell)
    if abs(direct - closed) > 1e-10:
        raise ArithmeticError(f"trace closed form {closed!r} disagrees with direct {direct!r}")

    dec = spectral_decompose(state)
    w = dec.eigenvalues
    lam_min = float(w[w >= zero_threshold(dec)][0])
    log_bound = n * math.log(d / n) - n * closed / lam_min - math.log(deg[ell - 1])
    return math.exp(log_bound), closed


def lower_detL(G: Multigraph) -> float:
    """``det(L) / delta_min``: always 0, kept as a numerical health check.

    ``det(L)`` is evaluated exactly on the integer Laplacian. A float LU
    determinant of ``L`` picks up round-off of order ``eps * tau(G)``, which is
    not small once the count is large.
    """
    deg = G.degrees()
    delta_min = min(deg)
    if delta_min == 0:
        raise DegenerateGraphError("minimum degree is 0")
    value = det_int(laplacian_int(G)) / delta_min
    if abs(value) > 1e-6:
        raise ArithmeticError(f"det(L)/delta_min = {value!r}, expected 0")
    return float(value)

