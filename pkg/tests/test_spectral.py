import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_expansion_ratio, jacobi_eigenvalues
from latingraphs.connectivity import is_connected
from latingraphs.latin import cyclic_difference_table, random_latin_square
from latingraphs.models import (
    Graph,
    MultiGraph,
    as_multigraph,
    build_multigraph,
    complete_graph,
    cycle_graph,
    sample_symbols_k,
)
from latingraphs.spectral import (
    edge_discrepancy,
    entropy_H,
    gap_certifies_connected,
    expansion_check,
    hamiltonicity_threshold,
    normalized_adjacency,
    spectrum,
    tail_bound,
)


def test_k4_as_multigraph():
    # K4 is 3-regular; as a simple regular graph T = A/3
    rep = spectrum(complete_graph(4))
    assert rep.mu == pytest.approx(1 / 3, abs=1e-12)
    assert rep.eigenvalues[0] == pytest.approx(1.0)
    assert rep.residuals["mu_agreement"] < 1e-12


def test_cycle_c4_is_bipartite():
    rep = spectrum(as_multigraph(cycle_graph(4)))
    assert rep.mu == pytest.approx(1.0)
    assert rep.eigenvalues[-1] == pytest.approx(-1.0)
    assert is_connected(cycle_graph(4))


def test_disconnected_multigraph_has_mu_one():
    L = cyclic_difference_table(6)
    M = build_multigraph(L, [3])  # a perfect matching plus nothing else
    rep = spectrum(M)
    assert rep.mu == pytest.approx(1.0)
    assert not is_connected(M)
    assert not gap_certifies_connected(rep.mu)
    assert not gap_certifies_connected(1 - 1e-15) and gap_certifies_connected(0.999)


def test_irregular_simple_graph_rejected():
    G = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        spectrum(G)
    with pytest.raises(ValueError):
        normalized_adjacency(MultiGraph(np.zeros((2, 2), dtype=np.int64), 0))


@pytest.mark.parametrize("seed", range(12))
def test_spectrum_matches_jacobi_oracle(seed):
    n = 5 + seed
    L = random_latin_square(n, seed)
    M = build_multigraph(L, sample_symbols_k(n, 3, seed))
    rep = spectrum(M)
    ref = jacobi_eigenvalues(normalized_adjacency(M))
    assert np.allclose(rep.eigenvalues, ref, atol=1e-9)
    assert rep.mu == pytest.approx(max(abs(ref[1]), abs(ref[-1])), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 40), k=st.integers(1, 12), seed=st.integers(0, 10 ** 6))
def test_doubly_stochastic_and_mu(n, k, seed):
    L = random_latin_square(n, seed, burn_in=10 * n)
    M = build_multigraph(L, sample_symbols_k(n, k, seed))
    rep = spectrum(M)
    r = rep.residuals
    assert r["lambda0"] <= 1e-9
    assert r["row_sums"] <= 1e-9 and r["col_sums"] <= 1e-9
    assert r["ones_eigvec"] <= 1e-9
    assert r["lambda_min_below_minus_one"] <= 1e-9
    assert r["mu_agreement"] <= 1e-8
    if gap_certifies_connected(rep.mu):
        assert is_connected(M)


def test_report_dict_summarises_large_spectra():
    L = cyclic_difference_table(130)
    d = spectrum(build_multigraph(L, [1, 2])).to_dict()
    assert set(d["eigenvalues"]) == {"top", "bottom", "mean", "std"}
    d = spectrum(build_multigraph(cyclic_difference_table(8), [1])).to_dict()
    assert len(d["eigenvalues"]["full"]) == 8


def test_entropy_values():
    assert entropy_H(0.75) == pytest.approx(0.130812, abs=1e-6)
    assert entropy_H(0.5) == pytest.approx(0.0, abs=1e-15)
    for x in (0.1, 0.3, 0.45):
        assert entropy_H(x) == pytest.approx(entropy_H(1 - x))
        assert entropy_H(x) > 0
    for bad in (0, 1, 1.5):
        with pytest.raises(ValueError):
            entropy_H(bad)


def test_tail_bound_values():
    exact, weak = tail_bound(64, 40, 0.5)
    assert exact == pytest.approx(0.68355, abs=1e-4)
    assert weak == pytest.approx(0.86246, abs=1e-4)
    tb = tail_bound(64, 40, 1 - 1e-12)
    assert tb.exact_bound < 2e-10
    assert tail_bound(64, 2, 0.5).exact_bound == 1.0
    for eps in (0.1, 0.3, 0.7, 0.9):
        e, w = tail_bound(1000, 200, eps)
        assert e <= w
    with pytest.raises(ValueError):
        tail_bound(10, 5, 1.0)


def test_edge_discrepancy_examples():
    M = as_multigraph(cycle_graph(4))
    res = edge_discrepancy(M, [0], [1], 1.0)
    assert (res.lhs, res.rhs) == (0.5, 2.0) and res.holds
    # e(A, A) counts internal edges twice
    res = edge_discrepancy(M, [0, 1], [0, 1], 1.0)
    assert res.lhs == pytest.approx(abs(2 - 2)) and res.holds
    assert edge_discrepancy(M, [], [1], 0.0).holds


def test_edge_discrepancy_random_pairs():
    rng = np.random.default_rng(5)
    for seed in range(10):
        L = random_latin_square(20, seed)
        M = build_multigraph(L, sample_symbols_k(20, 6, seed))
        mu = spectrum(M).mu
        for _ in range(20):
            A = np.flatnonzero(rng.random(20) < 0.4)
            B = np.flatnonzero(rng.random(20) < 0.6)
            assert edge_discrepancy(M, A, B, mu).holds


def test_expansion_examples():
    matching = Graph.from_edges(4, [(0, 1), (2, 3)])
    v = expansion_check(matching, 0.5)
    assert not v.is_expander and v.worst_ratio == 0.0
    assert set(v.witness) in ({0, 1}, {2, 3})
    v = expansion_check(complete_graph(6), 1.0)
    assert v.is_expander and v.worst_ratio == 1.0 and v.mode == "exhaustive"
    with pytest.raises(ValueError):
        expansion_check(complete_graph(3), 0)


@pytest.mark.parametrize("seed", range(10))
def test_expansion_against_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = 6 + seed
    A = np.triu(rng.random((n, n)) < 0.35, 1)
    G = Graph(A | A.T)
    v = expansion_check(G, 1.0)
    ref = brute_expansion_ratio(G.adjacency.tolist())
    assert v.worst_ratio == pytest.approx(ref)
    assert v.is_expander == (ref >= 1.0)
    W = set(v.witness)
    boundary = {j for i in W for j in range(n) if G.adjacency[i, j] and j not in W}
    assert 1 <= len(W) <= n // 2 and len(boundary) / len(W) == pytest.approx(ref)


def test_expansion_exhaustive_at_cap():
    L = cyclic_difference_table(18)
    from latingraphs.models import build_graph
    G = build_graph(L, [1])  # an 18-cycle
    v = expansion_check(G, 0.1)
    assert v.worst_ratio == pytest.approx(2 / 9)


def test_expansion_sampled_mode():
    v = expansion_check(complete_graph(30), 0.5, seed=1)
    assert v.mode == "sampled" and v.is_expander


def test_threshold():
    assert hamiltonicity_threshold(10 ** 6) == pytest.approx(5.17e-4, rel=2e-3)
    assert hamiltonicity_threshold(10 ** 9) == pytest.approx(4.0e-4, rel=5e-3)
    assert hamiltonicity_threshold(16) > 0
    with pytest.raises(ValueError):
        hamiltonicity_threshold(15)
