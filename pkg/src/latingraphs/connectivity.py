"""Connectivity, Hamiltonicity and distance statistics for small graphs.

Multigraph inputs are reduced to their simple graph first (loops dropped,
parallel edges merged); none of these properties depend on multiplicities.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import CapExceededError
from .latin import LatinSquare, paired_example_square
from .models import Graph, MultiGraph, build_graph, degree_profile

CONNECTIVITY_CAP = 256
HAMILTON_CAP = 20
INF = math.inf


def _simple(G):
    return G.simple() if isinstance(G, MultiGraph) else G


def _adjacency_lists(G):
    return [np.flatnonzero(row).tolist() for row in G.adjacency]


def is_connected(G) -> bool:
    G = _simple(G)
    n = G.n
    if n <= 1:
        return True
    adj = _adjacency_lists(G)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == n


class _FlowNetwork:
    """Dinic max flow on integer capacities."""

    def __init__(self, n):
        self.n = n
        self.head = [[] for _ in range(n)]
        self.to = []
        self.cap = []

    def add_edge(self, u, v, c, c_rev=0):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(c_rev)

    def _bfs(self, s, t):
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.head[u]:
                if self.cap[e] > 0 and level[self.to[e]] < 0:
                    level[self.to[e]] = level[u] + 1
                    queue.append(self.to[e])
        self.level = level
        return level[t] >= 0

    def _dfs(self, u, t, pushed):
        if u == t:
            return pushed
        edges = self.head[u]
        while self.it[u] < len(edges):
            e = edges[self.it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and self.level[v] == self.level[u] + 1:
                got = self._dfs(v, t, min(pushed, self.cap[e]))
                if got:
                    self.cap[e] -= got
                    self.cap[e ^ 1] += got
                    return got
            self.it[u] += 1
        return 0

    def max_flow(self, s, t, limit=None):
        flow = 0
        limit = INF if limit is None else limit
        while flow < limit and self._bfs(s, t):
            self.it = [0] * self.n
            while flow < limit:
                got = self._dfs(s, t, INF)
                if not got:
                    break
                flow += got
        return flow


def local_vertex_connectivity(G: Graph, s: int, t: int, limit=None) -> int:
    """Maximum number of internally disjoint ``s``-``t`` paths (``s``, ``t`` non-adjacent)."""
    n = G.n
    big = n + 1
    net = _FlowNetwork(2 * n)
    for v in range(n):
        net.add_edge(2 * v, 2 * v + 1, big if v in (s, t) else 1)
    for u, v in G.edges():
        net.add_edge(2 * u + 1, 2 * v, big)
        net.add_edge(2 * v + 1, 2 * u, big)
    return int(net.max_flow(2 * s + 1, 2 * t, limit))


def vertex_connectivity(G) -> int:
    """Exact vertex connectivity; ``n - 1`` for complete graphs."""
    G = _simple(G)
    n = G.n
    if n > CONNECTIVITY_CAP:
        raise CapExceededError(f"vertex connectivity is capped at n={CONNECTIVITY_CAP}")
    if n <= 1:
        return 0
    if G.is_complete():
        return n - 1
    if not is_connected(G):
        return 0
    adj = G.adjacency
    best = degree_profile(G).min_degree
    i = 0
    # some vertex among the first best+1 lies outside a minimum separator
    while i <= best and i < n:
        for j in range(i + 1, n):
            if not adj[i, j]:
                best = min(best, local_vertex_connectivity(G, i, j, limit=best))
        i += 1
    return best


def edge_connectivity(G) -> int:
    G = _simple(G)
    n = G.n
    if n > CONNECTIVITY_CAP:
        raise CapExceededError(f"edge connectivity is capped at n={CONNECTIVITY_CAP}")
    if n <= 1:
        return 0
    if not is_connected(G):
        return 0
    edges = G.edges()
    best = degree_profile(G).min_degree
    for t in range(1, n):
        net = _FlowNetwork(n)
        for u, v in edges:
            net.add_edge(u, v, 1, 1)
        best = min(best, int(net.max_flow(0, t, limit=best)))
        if best == 0:
            break
    return best


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    kappa: int
    lam: int
    delta: int
    kappa_equals_delta: bool
    kappa_equals_delta_minus_one: bool
    lambda_equals_delta: bool

    @property
    def whitney_chain_holds(self) -> bool:
        return self.kappa <= self.lam <= self.delta

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def connectivity_report(G) -> ConnectivityReport:
    G = _simple(G)
    kappa = vertex_connectivity(G)
    lam = edge_connectivity(G)
    delta = degree_profile(G).min_degree
    return ConnectivityReport(
        connected=is_connected(G),
        kappa=kappa,
        lam=lam,
        delta=delta,
        kappa_equals_delta=kappa == delta,
        kappa_equals_delta_minus_one=kappa == delta - 1,
        lambda_equals_delta=lam == delta,
    )


# -- Hamiltonicity --------------------------------------------------------------


def _mask_connected(mask, nb):
    if not mask:
        return True
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        low = frontier & -frontier
        frontier &= ~low
        new = nb[low.bit_length() - 1] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def hamiltonian_cycle_exact(G):
    """A Hamiltonian cycle starting at vertex 0, or ``None`` if none exists.

    Backtracking with two prunings: every unvisited vertex must keep two
    usable neighbours, and the unvisited vertices plus the path end must stay
    connected.
    """
    G = _simple(G)
    n = G.n
    if n > HAMILTON_CAP:
        raise CapExceededError(f"exact Hamiltonicity is capped at n={HAMILTON_CAP}")
    if n < 3:
        raise ValueError("Hamiltonian cycles need n >= 3")
    nb = G.adjacency_bitsets()
    if min(m.bit_count() for m in nb) < 2 or not is_connected(G):
        return None
    full = (1 << n) - 1
    path = [0]

    def feasible(v, remaining):
        allowed = remaining | 1 | (1 << v)
        m = remaining
        while m:
            low = m & -m
            m &= ~low
            u = low.bit_length() - 1
            if (nb[u] & allowed & ~low).bit_count() < 2:
                return False
        if not nb[0] & remaining:
            return False
        return _mask_connected(remaining | (1 << v), nb)

    def extend(v, visited):
        remaining = full & ~visited
        if not remaining:
            return bool(nb[v] & 1)
        if not feasible(v, remaining):
            return False
        cand = nb[v] & remaining
        options = []
        while cand:
            low = cand & -cand
            cand &= ~low
            w = low.bit_length() - 1
            options.append(((nb[w] & remaining).bit_count(), w))
        for _, w in sorted(options):
            path.append(w)
            if extend(w, visited | (1 << w)):
                return True
            path.pop()
        return False

    if extend(0, 1):
        return list(path)
    return None


def is_hamiltonian(G) -> bool:
    return hamiltonian_cycle_exact(G) is not None


# -- distances ------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceMetrics:
    diameter: float
    girth: float
    triangle_count: int
    triangles_at_vertex_0: int

    def to_dict(self):
        return {
            k: ("inf" if isinstance(v, float) and math.isinf(v) else v)
            for k, v in asdict(self).items()
        }


def _bfs_distances(adj, root, n):
    dist = [-1] * n
    parent = [-1] * n
    dist[root] = 0
    queue = deque([root])
    shortest_cycle = INF
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
            elif parent[u] != w:
                shortest_cycle = min(shortest_cycle, dist[u] + dist[w] + 1)
    return dist, shortest_cycle


def distance_metrics(G) -> DistanceMetrics:
    G = _simple(G)
    n = G.n
    adj = _adjacency_lists(G)
    diameter = 0
    girth = INF
    for v in range(n):
        dist, cyc = _bfs_distances(adj, v, n)
        girth = min(girth, cyc)
        if diameter != INF:
            diameter = INF if min(dist) < 0 else max(diameter, max(dist))
    A = G.adjacency.astype(np.float64)
    A2 = A @ A
    diag3 = np.einsum("ij,ji->i", A2, A)
    triangles = int(round(diag3.sum() / 6))
    at0 = int(round(diag3[0] / 2)) if n else 0
    return DistanceMetrics(diameter, girth, triangles, at0)


def has_triangle(G) -> bool:
    G = _simple(G)
    A = G.adjacency.astype(np.float64)
    return bool(((A @ A) * A).any())


def vertex_in_triangle(G, v=0) -> bool:
    G = _simple(G)
    A = G.adjacency
    nbrs = np.flatnonzero(A[v])
    return bool(A[np.ix_(nbrs, nbrs)].any())


# -- paired example ---------------------------------------------------------------


def _require_paired(L: LatinSquare):
    if L.family_tag == "paired-example":
        return L.order // 2
    n = L.order
    if n % 2 == 0 and n >= 4 and L == paired_example_square(n // 2):
        return n // 2
    raise ValueError("square is not a member of the paired-example family")


def paired_neighborhood_check(L: LatinSquare, S) -> bool:
    """Whether ``N((x,0)) - {(x,1)} == N((x,1)) - {(x,0)}`` for every ``x``."""
    r = _require_paired(L)
    A = build_graph(L, S).adjacency
    for x in range(r):
        a = A[x].copy()
        b = A[x + r].copy()
        a[x + r] = False
        b[x] = False
        if not np.array_equal(a, b):
            return False
    return True


def paired_pair_adjacent(L: LatinSquare, S) -> bool:
    """Whether some ``(x,0)`` is adjacent to its partner ``(x,1)``."""
    r = _require_paired(L)
    A = build_graph(L, S).adjacency
    return bool(any(A[x, x + r] for x in range(r)))
