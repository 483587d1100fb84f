import math

import numpy as np
import pytest
from mpmath import mp, mpf

from treentropy.bounds import (
    DegenerateGraphError,
    bound_quadratic,
    bound_suite,
    lower_detL,
    ordering_check,
    quadratic_trace,
    sigma_bound,
    sigma_bound_alt,
)
from treentropy.channels import pinch
from treentropy.gen import FamilySpec, connected, generate
from treentropy.graphcore import density_matrix, from_edge_list
from treentropy.treecount import IsolatedVertexError

EXAMPLE4_GRAPH = generate(FamilySpec("paper_example"))


def star_bounds_hp(n):
    """tau_A, tau_B, tau_D of the star K_{1,n-1} at 50 digits."""
    mp.dps = 50
    tauA = mpf(n - 1) ** (mpf(n - 1) / n)
    tauB = (mpf(2 * (n - 1)) / n) ** (n - 1)
    tauD = (mpf(2 * (n - 1)) / n) ** n / (n - 1)
    return float(tauA), float(tauB), float(tauD)


def test_paper_example_values():
    r = bound_suite(EXAMPLE4_GRAPH)
    assert r.tau_exact == 3
    assert r.tau0 == pytest.approx(4.0, rel=1e-12)
    assert r.tau_trivial == 4
    assert r.tauA == pytest.approx(12 ** 0.75, rel=1e-9)
    assert r.tauB == pytest.approx(8.0, rel=1e-9)
    assert r.tauC == pytest.approx(16 / 12 ** 0.25, rel=1e-9)
    assert r.tauD == pytest.approx(16 / 3, rel=1e-9)
    assert r.tauE == pytest.approx(125 / 27, rel=1e-9)
    # printed values, two decimals (tau_E printed as 4.62 against 4.6296)
    for got, printed in [(r.tauA, 6.45), (r.tauC, 8.6), (r.tauD, 5.33), (r.tauE, 4.62)]:
        assert abs(got - printed) < 0.01
    assert r.tauA > r.tauD


@pytest.mark.parametrize("n", [3, 5, 8])
def test_complete_graph_bounds_coincide(n):
    r = bound_suite(generate(FamilySpec("complete", n=n)))
    for name in ("tau0", "tauA", "tauB", "tauC", "tauD", "tauE"):
        assert getattr(r, name) == pytest.approx((n - 1) ** (n - 1), rel=1e-9)
    assert r.tau_trivial == math.comb(n * (n - 1) // 2, n - 1)


def test_trivial_exceeds_cayley_bound_from_seven():
    for n in range(3, 10):
        r = bound_suite(generate(FamilySpec("complete", n=n)))
        assert (r.tau_trivial > (n - 1) ** (n - 1)) == (n >= 7)


@pytest.mark.parametrize("n", range(3, 11))
def test_star_bounds(n):
    r = bound_suite(generate(FamilySpec("star", n=n)))
    tauA, tauB, tauD = star_bounds_hp(n)
    assert r.tau_exact == 1
    assert r.tau0 == pytest.approx(1.0, rel=1e-12)
    assert r.tauE == pytest.approx(1.0, rel=1e-12)
    assert r.tauA == pytest.approx(tauA, rel=1e-9)
    assert r.tauB == pytest.approx(tauB, rel=1e-9)
    assert r.tauD == pytest.approx(tauD, rel=1e-9)


def test_star_crossover_witness():
    order = {}
    for n in (4, 5, 6, 7):
        r = bound_suite(generate(FamilySpec("star", n=n)))
        verdict = next(o for o in r.orderings if o.name == "tauA<=tauD")
        assert not verdict.asserted
        order[n] = verdict.holds
    assert order == {4: False, 5: False, 6: True, 7: True}


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("k", range(1, 6))
def test_multistar_tightness(n, k):
    r = bound_suite(generate(FamilySpec("multistar", n=n, k=k)))
    assert r.tau_exact == k
    assert round(r.tau0) == k and abs(r.tau0 - k) < 1e-9 * k
    assert "tau0" in r.tight()


def test_ordering_check_k7_zero_slack():
    r = bound_suite(generate(FamilySpec("complete", n=7)))
    chains = [o for o in ordering_check(r) if o.asserted and not o.name.startswith("tau<=")
              and o.name != "tauA<=tauF"]
    assert all(o.holds for o in chains)
    assert all(abs(o.slack) < 1e-12 for o in chains if o.name != "detD/(TrD/n)^n<=1")


def test_orderings_on_corpus(corpus_graphs):
    checked = 0
    for label, G in corpus_graphs:
        if min(G.degrees()) == 0:
            continue
        r = bound_suite(G)
        bad = [o.name for o in r.orderings if o.asserted and not o.holds]
        assert not bad, (label, bad)
        assert abs(sigma_bound(G) - sigma_bound_alt(G)) <= 1e-9 * max(1, sigma_bound(G))
        checked += 1
    assert checked > 150


def test_degenerate_report():
    G = from_edge_list(4, [(1, 2), (2, 3), (1, 3)])
    r = bound_suite(G)
    assert r.degenerate and r.tau_exact == 0
    assert r.tauA == r.tauC == r.tauF == r.tau_sigma == 0.0
    assert r.orderings == []
    with pytest.raises(ValueError):
        bound_suite(from_edge_list(1, []))


def test_report_round_trip():
    r = bound_suite(EXAMPLE4_GRAPH)
    assert type(r).from_dict(r.to_dict()) == r


def test_quadratic_trace_brute_force():
    K3 = generate(FamilySpec("complete", n=3))
    diff = np.eye(3) / 3 - pinch(density_matrix(K3), 1)
    brute = float(np.trace(diff @ diff))
    assert brute == pytest.approx(1 / 18, rel=1e-12)
    assert quadratic_trace(K3, 1) == pytest.approx(1 / 18, rel=1e-12)
    _, trace = bound_quadratic(K3, 1)
    assert trace == pytest.approx(1 / 18, rel=1e-12)


def test_quadratic_trace_multigraph():
    G = generate(FamilySpec("erdos_renyi", n=6, p=0.7, k=3, seed=11))
    for ell in range(1, G.n + 1):
        diff = np.eye(G.n) / G.n - pinch(density_matrix(G), ell)
        assert quadratic_trace(G, ell) == pytest.approx(float(np.trace(diff @ diff)), abs=1e-12)
        assert quadratic_trace(G, ell) >= 0


def test_quadratic_lower_bound():
    lb, _ = bound_quadratic(generate(FamilySpec("path", n=3)))
    assert 0 < lb <= 1
    with pytest.raises(DegenerateGraphError):
        bound_quadratic(from_edge_list(4, [(1, 2), (3, 4)]), 1)
    with pytest.raises(IsolatedVertexError):
        bound_quadratic(from_edge_list(3, [(1, 2)]), 3)


def test_lower_detL():
    for spec in [FamilySpec("complete", n=4), FamilySpec("cycle", n=5), FamilySpec("paper_example")]:
        assert lower_detL(generate(spec)) == 0.0
    with pytest.raises(DegenerateGraphError):
        lower_detL(from_edge_list(3, [(1, 2)]))


def test_sigma_bound_is_sound(corpus_graphs):
    for label, G in corpus_graphs:
        if not connected(G):
            continue
        r = bound_suite(G, with_orderings=False)
        assert r.tau_sigma >= r.tau_exact * (1 - 1e-9), label
