import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latingraphs.latin import (
    cyclic_difference_table,
    paired_example_square,
    random_latin_square,
    symbol_permutation,
)
from latingraphs.models import (
    Graph,
    as_multigraph,
    build_graph,
    build_multigraph,
    complement_graph,
    complete_graph,
    cycle_graph,
    degree_bounds_hold,
    degree_profile,
    empty_graph,
    sample_symbols_k,
    sample_symbols_p,
)


def rule_graph(L, S):
    n = L.order
    S = set(S)
    return [[i != j and (L.cells[i, j] in S or L.cells[j, i] in S) for j in range(n)] for i in range(n)]


def test_sample_p_extremes():
    assert sample_symbols_p(10, 0.0, 1).symbols == ()
    assert sample_symbols_p(10, 1.0, 1).symbols == tuple(range(10))
    with pytest.raises(ValueError):
        sample_symbols_p(10, 1.5, 1)


def test_sample_p_mean_size():
    # Binomial(1000, 0.5): mean 500, sd 15.8
    sizes = [len(sample_symbols_p(1000, 0.5, s)) for s in range(200)]
    assert abs(np.mean(sizes) - 500) <= 50
    s = sample_symbols_p(1000, 0.5, 3)
    assert list(s.symbols) == sorted(set(s.symbols))
    assert s == sample_symbols_p(1000, 0.5, 3)


def test_sample_k():
    assert sample_symbols_k(5, 0, 1).symbols == ()
    assert sample_symbols_k(1, 7, 1).symbols == (0,) * 7
    # Binomial(10^4, 0.1): mean 1000, sd 30
    counts = np.bincount(sample_symbols_k(10, 10 ** 4, 5).symbols, minlength=10)
    assert (np.abs(counts - 1000) <= 100).all()
    s = sample_symbols_k(10, 30, 2)
    assert len(s) == 30 and s.k_exceeds_n


def test_build_graph_examples():
    G = build_graph(cyclic_difference_table(3), [1])
    assert G == complete_graph(3)
    G = build_graph(cyclic_difference_table(4), [2])
    assert sorted(G.edges()) == [(0, 2), (1, 3)]
    assert build_graph(cyclic_difference_table(5), []).n_edges == 0
    with pytest.raises(ValueError):
        build_graph(cyclic_difference_table(4), [4])


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 10), seed=st.integers(0, 10 ** 6), p=st.floats(0, 1))
def test_build_graph_matches_rule(n, seed, p):
    L = random_latin_square(n, seed, burn_in=20 * n)
    S = sample_symbols_p(n, p, seed)
    G = build_graph(L, S)
    assert G.adjacency.tolist() == rule_graph(L, S.symbols)
    assert (G.adjacency == G.adjacency.T).all()
    assert not G.adjacency.diagonal().any()


def test_multigraph_examples():
    L = cyclic_difference_table(3)
    M = build_multigraph(L, [1, 1])
    assert M.weights.tolist() == [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    assert (M.weights.sum(axis=1) == 4).all()
    M = build_multigraph(L, [0])
    assert M.weights.tolist() == (2 * np.eye(3, dtype=int)).tolist()
    M = build_multigraph(L, [])
    assert (M.weights == 0).all() and M.k == 0


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 9), seed=st.integers(0, 10 ** 6), k=st.integers(0, 15))
def test_multigraph_is_sum_of_permutations(n, seed, k):
    L = random_latin_square(n, seed, burn_in=20 * n)
    S = sample_symbols_k(n, k, seed)
    M = build_multigraph(L, S)
    assert (M.weights.sum(axis=1) == 2 * k).all()
    assert (M.weights == M.weights.T).all()
    want = np.zeros((n, n), dtype=int)
    for s in S.symbols:
        P = symbol_permutation(L, s).matrix()
        want += P + P.T
    assert np.array_equal(M.weights, want)
    assert M.simple() == build_graph(L, S.support)


def test_complement():
    assert complement_graph(complete_graph(3)) == empty_graph(3)
    matching = Graph.from_edges(4, [(0, 2), (1, 3)])
    assert complement_graph(matching) == cycle_graph(4)
    G = build_graph(cyclic_difference_table(7), [1, 3])
    assert complement_graph(complement_graph(G)) == G


def test_degree_profile():
    assert degree_profile(complete_graph(3))[:2] == (2, 2)
    assert degree_profile(Graph.from_edges(4, [(0, 2), (1, 3)]))[:2] == (1, 1)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 14), seed=st.integers(0, 10 ** 6), p=st.floats(0.05, 1))
def test_degree_bounds_random(n, seed, p):
    L = random_latin_square(n, seed, burn_in=20 * n)
    S = sample_symbols_p(n, p, seed)
    G = build_graph(L, S)
    assert degree_bounds_hold(G, len(S))
    mn, mx, _ = degree_profile(G)
    if len(S):
        assert mx <= 2 * mn + 2  # max/min degree ratio is essentially at most 2


def test_as_multigraph():
    M = as_multigraph(cycle_graph(4))
    assert M.k == 1
    with pytest.raises(ValueError):
        as_multigraph(complete_graph(4))  # odd degree
    with pytest.raises(ValueError):
        as_multigraph(Graph.from_edges(3, [(0, 1)]))


def test_paired_example_graphs_share_neighbourhoods():
    for r in (2, 3, 4):
        L = paired_example_square(r)
        for size in range(2 * r + 1):
            for S in itertools.combinations(range(2 * r), size):
                A = build_graph(L, S).adjacency.copy()
                for x in range(r):
                    a, b = A[x].copy(), A[x + r].copy()
                    a[x + r] = b[x] = False
                    assert (a == b).all()
