"""Symbol sampling and the Latin square graph models.

``build_graph`` realizes ``G(L, S)``: ``i ~ j`` iff ``L[i, j]`` or ``L[j, i]``
lies in ``S``.  ``build_multigraph`` keeps multiplicities and loops, with a
loop contributing 2 to the diagonal so every row of the weight matrix sums
to ``2k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._rng import make_rng
from .latin import LatinSquare


@dataclass(frozen=True)
class SymbolSample:
    """A random symbol set.

    ``mode`` is ``"subset_p"`` (strictly increasing symbols, ``param`` = p) or
    ``"multiset_k"`` (sorted with repetition, ``param`` = k).
    """

    mode: str
    symbols: tuple
    seed: int
    n: int
    param: float

    @property
    def support(self) -> tuple:
        return tuple(sorted(set(self.symbols)))

    def __len__(self):
        return len(self.symbols)

    @property
    def k_exceeds_n(self) -> bool:
        return self.mode == "multiset_k" and self.param > self.n


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on ``0..n-1`` stored as a boolean adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self):
        self.adjacency.setflags(write=False)

    @classmethod
    def from_edges(cls, n, edges):
        A = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                continue
            A[i, j] = A[j, i] = True
        return cls(A)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edges(self):
        i, j = np.nonzero(np.triu(self.adjacency, 1))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def n_edges(self) -> int:
        return int(np.triu(self.adjacency, 1).sum())

    def neighbors(self, v) -> np.ndarray:
        return np.flatnonzero(self.adjacency[v])

    def adjacency_bitsets(self) -> list:
        """Neighbourhoods as Python int bitmasks (bit ``j`` set iff ``j`` adjacent)."""
        out = []
        for row in self.adjacency:
            m = 0
            for j in np.flatnonzero(row).tolist():
                m |= 1 << j
            out.append(m)
        return out

    def is_regular(self) -> bool:
        d = self.degrees
        return bool(d.size == 0 or (d == d[0]).all())

    def is_complete(self) -> bool:
        return self.n_edges == self.n * (self.n - 1) // 2

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.n_edges})"


@dataclass(frozen=True, eq=False)
class MultiGraph:
    """``2k``-regular multigraph; ``weights[i, i]`` is twice the loop count at ``i``."""

    weights: np.ndarray
    k: int

    def __post_init__(self):
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def degree(self) -> int:
        return 2 * self.k

    def simple(self) -> Graph:
        """Underlying simple graph: loops dropped, multiplicities collapsed."""
        A = self.weights > 0
        A = A.copy()
        np.fill_diagonal(A, False)
        return Graph(A)

    def __eq__(self, other):
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.weights, other.weights)

    def __repr__(self):
        return f"MultiGraph(n={self.n}, k={self.k})"


def sample_symbols_p(n, p, seed) -> SymbolSample:
    """Keep each symbol of ``0..n-1`` independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    keep = rng.random(n) < p
    return SymbolSample("subset_p", tuple(np.flatnonzero(keep).tolist()), int(seed), int(n), float(p))


def sample_symbols_k(n, k, seed) -> SymbolSample:
    """``k`` uniform draws from ``0..n-1`` with replacement, returned sorted."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    rng = make_rng(seed)
    draws = np.sort(rng.integers(0, n, size=int(k)))
    return SymbolSample("multiset_k", tuple(draws.tolist()), int(seed), int(n), int(k))


def _symbols_of(S):
    if isinstance(S, SymbolSample):
        return list(S.symbols)
    return [int(s) for s in S]


def _check_range(symbols, n):
    for s in symbols:
        if not 0 <= s < n:
            raise ValueError(f"symbol {s} outside 0..{n - 1}")


def build_graph(L: LatinSquare, S) -> Graph:
    """Latin square graph ``G(L, S)``; repeated symbols in ``S`` are ignored."""
    n = L.order
    symbols = _symbols_of(S)
    _check_range(symbols, n)
    mask = np.zeros(n, dtype=bool)
    mask[symbols] = True
    member = mask[L.cells]
    A = member | member.T
    np.fill_diagonal(A, False)
    return Graph(A)


def build_multigraph(L: LatinSquare, S) -> MultiGraph:
    """Multigraph model: ``A[i, j] = #{s in S: L[i,j] = s} + #{s in S: L[j,i] = s}``."""
    n = L.order
    symbols = _symbols_of(S)
    _check_range(symbols, n)
    counts = np.bincount(np.asarray(symbols, dtype=np.int64), minlength=n)
    occ = counts[L.cells]
    W = occ + occ.T
    return MultiGraph(W.astype(np.int64), len(symbols))


def complement_graph(G: Graph) -> Graph:
    A = ~G.adjacency
    np.fill_diagonal(A, False)
    return Graph(A)


class DegreeProfile(NamedTuple):
    min_degree: int
    max_degree: int
    degrees: tuple


def degree_profile(G: Graph) -> DegreeProfile:
    d = G.degrees
    if d.size == 0:
        return DegreeProfile(0, 0, ())
    return DegreeProfile(int(d.min()), int(d.max()), tuple(d.tolist()))


def degree_bounds_hold(G: Graph, s: int) -> bool:
    """Whether ``s - 1 <= min degree <= max degree <= 2 s`` for ``s = |S|``."""
    prof = degree_profile(G)
    return s - 1 <= prof.min_degree <= prof.max_degree <= 2 * s


def complete_graph(n) -> Graph:
    A = np.ones((n, n), dtype=bool)
    np.fill_diagonal(A, False)
    return Graph(A)


def cycle_graph(n) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool))


def as_multigraph(G: Graph) -> MultiGraph:
    """View a regular simple graph of even degree ``2k`` as a multigraph."""
    if not G.is_regular():
        raise ValueError("only regular graphs can be viewed as 2k-regular multigraphs")
    d = int(G.degrees[0]) if G.n else 0
    if d % 2:
        raise ValueError(f"degree {d} is odd; no k with 2k = degree")
    return MultiGraph(G.adjacency.astype(np.int64), d // 2)
