import itertools
import math

import numpy as np
import pytest

from oracles import (
    bfs_all_pairs,
    brute_edge_connectivity,
    brute_girth,
    brute_hamiltonian,
    brute_vertex_connectivity,
)
from latingraphs.connectivity import (
    connectivity_report,
    distance_metrics,
    edge_connectivity,
    hamiltonian_cycle_exact,
    has_triangle,
    is_connected,
    is_hamiltonian,
    paired_neighborhood_check,
    paired_pair_adjacent,
    vertex_connectivity,
    vertex_in_triangle,
)
from latingraphs.exceptions import CapExceededError
from latingraphs.latin import cyclic_difference_table, paired_example_square
from latingraphs.models import (
    Graph,
    build_graph,
    complete_graph,
    cycle_graph,
    degree_profile,
    empty_graph,
)


def random_graph(n, density, seed):
    rng = np.random.default_rng(seed)
    A = np.triu(rng.random((n, n)) < density, 1)
    return Graph(A | A.T)


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_connectivity_examples():
    rep = connectivity_report(complete_graph(5))
    assert (rep.kappa, rep.lam, rep.delta) == (4, 4, 4)
    rep = connectivity_report(cycle_graph(6))
    assert (rep.kappa, rep.lam, rep.delta) == (2, 2, 2)
    rep = connectivity_report(path_graph(4))
    assert (rep.kappa, rep.lam) == (1, 1)
    rep = connectivity_report(empty_graph(3))
    assert (rep.connected, rep.kappa, rep.lam) == (False, 0, 0)
    assert rep.to_dict()["lambda"] == 0


def test_star_and_bowtie():
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    assert vertex_connectivity(star) == 1 and edge_connectivity(star) == 1
    bowtie = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    rep = connectivity_report(bowtie)
    assert (rep.kappa, rep.lam, rep.delta) == (1, 2, 2)


@pytest.mark.parametrize("seed", range(40))
def test_connectivity_against_brute_force(seed):
    n = 3 + seed % 8
    G = random_graph(n, 0.3 + 0.6 * ((seed * 3) % 7) / 7, seed)
    adj = G.adjacency.tolist()
    assert vertex_connectivity(G) == brute_vertex_connectivity(adj)
    assert edge_connectivity(G) == brute_edge_connectivity(adj)
    assert connectivity_report(G).whitney_chain_holds


def test_connectivity_caps():
    with pytest.raises(CapExceededError):
        vertex_connectivity(empty_graph(257))
    with pytest.raises(CapExceededError):
        hamiltonian_cycle_exact(cycle_graph(21))


def test_hamiltonian_examples():
    assert hamiltonian_cycle_exact(complete_graph(3)) == [0, 1, 2]
    assert hamiltonian_cycle_exact(path_graph(4)) is None
    assert not is_hamiltonian(Graph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3)]))
    with pytest.raises(ValueError):
        hamiltonian_cycle_exact(complete_graph(2))
    # Petersen graph is the classic non-Hamiltonian cubic graph
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    assert not is_hamiltonian(Graph.from_edges(10, outer + spokes + inner))


@pytest.mark.parametrize("seed", range(40))
def test_hamiltonian_against_permutations(seed):
    n = 3 + seed % 7
    G = random_graph(n, 0.35 + 0.5 * ((seed * 5) % 9) / 9, seed)
    cyc = hamiltonian_cycle_exact(G)
    assert (cyc is not None) == brute_hamiltonian(G.adjacency.tolist())
    if cyc is not None:
        assert cyc[0] == 0 and sorted(cyc) == list(range(n))
        assert all(G.adjacency[cyc[t], cyc[(t + 1) % n]] for t in range(n))


def test_hamiltonian_on_latin_graph_at_cap():
    G = build_graph(cyclic_difference_table(20), [1, 7])
    cyc = hamiltonian_cycle_exact(G)
    assert cyc is not None and len(cyc) == 20


def test_distance_examples():
    d = distance_metrics(cycle_graph(5))
    assert (d.diameter, d.girth, d.triangle_count) == (2, 5, 0)
    d = distance_metrics(complete_graph(4))
    assert (d.diameter, d.girth, d.triangle_count, d.triangles_at_vertex_0) == (1, 3, 4, 3)
    d = distance_metrics(path_graph(4))
    assert d.girth == math.inf and d.diameter == 3
    d = distance_metrics(empty_graph(2))
    assert d.diameter == math.inf
    assert d.to_dict()["girth"] == "inf"


@pytest.mark.parametrize("seed", range(25))
def test_distances_against_oracles(seed):
    n = 3 + seed % 6
    G = random_graph(n, 0.45, seed)
    adj = G.adjacency.tolist()
    D = bfs_all_pairs(adj)
    d = distance_metrics(G)
    assert d.diameter == max(max(row) for row in D)
    assert d.girth == brute_girth(adj)
    tri = sum(1 for a, b, c in itertools.combinations(range(n), 3) if adj[a][b] and adj[b][c] and adj[a][c])
    assert d.triangle_count == tri
    assert has_triangle(G) == (tri > 0)
    at0 = sum(1 for b, c in itertools.combinations(range(1, n), 2) if adj[0][b] and adj[0][c] and adj[b][c])
    assert d.triangles_at_vertex_0 == at0
    assert vertex_in_triangle(G, 0) == (at0 > 0)


def test_paired_small_example():
    L = paired_example_square(2)
    G = build_graph(L, [1])
    assert paired_neighborhood_check(L, [1])
    assert paired_neighborhood_check(L, [])
    assert not paired_pair_adjacent(L, [])
    assert G == cycle_graph(4)
    # (x,0) ~ (x,1) exactly when 2x + r is in S
    assert paired_pair_adjacent(L, [2]) and not paired_pair_adjacent(L, [1, 3])


@pytest.mark.parametrize("r", [2, 3, 4])
def test_paired_neighbourhoods_every_subset(r):
    L = paired_example_square(r)
    n = 2 * r
    for mask in range(1 << n):
        S = [s for s in range(n) if mask >> s & 1]
        assert paired_neighborhood_check(L, S)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_paired_connectivity_drops_below_partner_degree(r):
    # when partners are adjacent and (x,0) is not universal, the rest of its
    # neighbourhood is a separator shared with (x,1)
    L = paired_example_square(r)
    n = 2 * r
    for mask in range(1, 1 << n):
        S = [s for s in range(n) if mask >> s & 1]
        G = build_graph(L, S)
        if not is_connected(G):
            continue
        deg = G.degrees
        kappa = vertex_connectivity(G)
        for x in range(r):
            if G.adjacency[x, x + r] and deg[x] < n - 1:
                assert kappa <= deg[x] - 1


def test_paired_regularity_counterexample():
    # symbols on the diagonal produce loops that the simple graph drops
    L = paired_example_square(3)
    G = build_graph(L, [0])
    prof = degree_profile(G)
    assert prof.min_degree != prof.max_degree


def test_paired_requires_family():
    with pytest.raises(ValueError):
        paired_neighborhood_check(cyclic_difference_table(4), [1])
    L = paired_example_square(3)
    from latingraphs.latin import validate_latin
    assert paired_neighborhood_check(validate_latin(L.cells.copy()), [1, 2])
