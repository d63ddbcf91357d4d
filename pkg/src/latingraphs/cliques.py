"""Coincidence-pattern counting, spread subsets, cliques and greedy colourings.

The pattern counts for a vertex set ``A`` look at the symbols ``L[i, j]`` on
ordered pairs of distinct elements of ``A``:

* ``n2`` -- unordered pairs ``{i, j}`` with ``L[i, j] == L[j, i]``;
* ``n3`` -- ordered distinct triples ``(i, j, k)`` with ``L[i, j] == L[j, k]``;
* ``n4`` -- unordered pairs of ordered pairs ``{(i, j), (k, l)}`` on four
  distinct elements with ``L[i, j] == L[k, l]``.

Two distinct cells in a Latin square carrying the same symbol never share a
row or a column, so every coincident pair of cells is exactly one of these
shapes and ``n2 + n3 + n4 == sum_x C(r_x, 2)``.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from ._rng import make_rng
from .exceptions import CapExceededError
from .latin import LatinSquare
from .models import Graph, complement_graph

CLIQUE_EXACT_CAP = 64
SPREAD_EXHAUSTIVE_LIMIT = 10 ** 6
SPREAD_RANDOM_DRAWS = 10 ** 4


def derived_symbols(L: LatinSquare, A):
    """Symbols on ordered pairs of distinct elements of ``A``, with multiplicities.

    Returns ``(symbols, counts)`` where ``symbols`` is the sorted derived set
    and ``counts`` maps each symbol ``x`` to ``r_x``.
    """
    A = sorted(set(int(v) for v in A))
    if len(A) < 2:
        return (), {}
    sub = L.cells[np.ix_(A, A)]
    off = sub[~np.eye(len(A), dtype=bool)]
    counts = Counter(off.tolist())
    return tuple(sorted(counts)), dict(sorted(counts.items()))


@dataclass(frozen=True)
class PatternCounts:
    subset: tuple
    derived: tuple
    multiplicities: dict
    n2: int
    n3: int
    n4: int

    @property
    def pair_total(self) -> int:
        return sum(r * (r - 1) // 2 for r in self.multiplicities.values())

    @property
    def identity_holds(self) -> bool:
        return self.n2 + self.n3 + self.n4 == self.pair_total


def pattern_counts(L: LatinSquare, A) -> PatternCounts:
    A = sorted(set(int(v) for v in A))
    derived, mult = derived_symbols(L, A)
    a = len(A)
    if a < 2:
        return PatternCounts(tuple(A), derived, mult, 0, 0, 0)
    cells = L.cells
    inA = np.zeros(L.order, dtype=bool)
    inA[A] = True
    # col_of[row, symbol] = column holding symbol in that row
    col_of = np.empty_like(cells)
    rows = np.arange(L.order)[:, None]
    col_of[rows, cells] = np.arange(L.order)[None, :]

    n2 = 0
    n3 = 0
    cells_by_symbol = {}
    for i in A:
        for j in A:
            if i == j:
                continue
            x = int(cells[i, j])
            if j > i and x == cells[j, i]:
                n2 += 1
            k = int(col_of[j, x])
            if inA[k] and k != i:
                n3 += 1
            cells_by_symbol.setdefault(x, []).append((i, j))
    n4 = 0
    for positions in cells_by_symbol.values():
        for (i, j), (k, l) in itertools.combinations(positions, 2):
            if len({i, j, k, l}) == 4:
                n4 += 1
    return PatternCounts(tuple(A), derived, mult, n2, n3, n4)


def lemma_bound(a: int, b: int, n2_B: int = 0) -> float:
    """Lower bound on ``|B'|`` guaranteed for some ``b``-subset of an ``a``-set.

    ``b(b-1)(1 - (b-2)/(a-2) - (b-2)(b-3)/(2(a-3))) - n2(B)``.  For
    ``a <= 3`` the fractions are undefined and ``-inf`` is returned.
    """
    if a <= 3:
        return -math.inf
    main = b * (b - 1) * (1 - (b - 2) / (a - 2) - (b - 2) * (b - 3) / (2 * (a - 3)))
    return main - n2_B


@dataclass(frozen=True)
class SpreadResult:
    subset: tuple
    derived_size: int
    n2: int
    bound: float
    holds: bool
    method: str  # "exhaustive", "random" or "heuristic"


def _spread_stats(cells, B):
    if len(B) < 2:
        return 0, 0
    sub = cells[np.ix_(B, B)]
    off = sub[~np.eye(len(B), dtype=bool)]
    iu = np.triu_indices(len(B), 1)
    n2 = int((sub[iu] == sub.T[iu]).sum())
    return len(np.unique(off)), n2


def spread_subset(L: LatinSquare, A, b: int, seed=0) -> SpreadResult:
    """Find ``B`` of size ``b`` inside ``A`` with ``|B'|`` at least the lemma bound.

    Every ``b``-subset is tried when there are at most a million of them;
    otherwise up to 10^4 random subsets are drawn.  If nothing meets the bound
    the subset maximizing ``|B'| + n2(B)`` comes back with ``holds=False`` and
    method ``"heuristic"``.
    """
    A = sorted(set(int(v) for v in A))
    a = len(A)
    if not 0 <= b <= a:
        raise ValueError(f"b must lie in 0..{a}, got {b}")
    cells = L.cells
    if math.comb(a, b) <= SPREAD_EXHAUSTIVE_LIMIT:
        candidates = itertools.combinations(A, b)
        method = "exhaustive"
    else:
        rng = make_rng(seed)
        candidates = (
            tuple(sorted(rng.choice(A, size=b, replace=False).tolist()))
            for _ in range(SPREAD_RANDOM_DRAWS)
        )
        method = "random"
    best = None
    for B in candidates:
        B = list(B)
        size, n2 = _spread_stats(cells, B)
        bound = lemma_bound(a, b, n2)
        if size >= bound:
            return SpreadResult(tuple(B), size, n2, bound, True, method)
        if best is None or size + n2 > best[1] + best[2]:
            best = (tuple(B), size, n2, bound)
    B, size, n2, bound = best
    return SpreadResult(B, size, n2, bound, False, "heuristic")


# -- exact clique number ------------------------------------------------------


def _color_sort(P, nb):
    order = []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            U &= ~low
            Q &= ~low
            Q &= ~nb[v]
            order.append((v, color))
    return order


def max_clique(G: Graph) -> tuple:
    """A maximum clique of ``G`` (branch and bound with colouring bounds)."""
    n = G.n
    if n > CLIQUE_EXACT_CAP:
        raise CapExceededError(
            f"exact clique search is capped at n={CLIQUE_EXACT_CAP}; "
            "use sampling-mode experiments for larger graphs"
        )
    if n == 0:
        return ()
    nb = G.adjacency_bitsets()
    best = [1 << 0]  # any single vertex is a clique

    def expand(R, size, P):
        for v, c in reversed(_color_sort(P, nb)):
            if size + c <= best[0].bit_count():
                return
            bit = 1 << v
            newP = P & nb[v]
            if newP:
                expand(R | bit, size + 1, newP)
            elif size + 1 > best[0].bit_count():
                best[0] = R | bit
            P &= ~bit

    expand(0, 0, (1 << n) - 1)
    mask = best[0]
    return tuple(v for v in range(n) if mask >> v & 1)


def clique_number_exact(G: Graph) -> int:
    return len(max_clique(G))


def independence_number_exact(G: Graph) -> int:
    return clique_number_exact(complement_graph(G))


# -- greedy colourings --------------------------------------------------------


def _ordering(G, ordering):
    if ordering is None:
        return list(range(G.n))
    ordering = [int(v) for v in ordering]
    if sorted(ordering) != list(range(G.n)):
        raise ValueError("ordering must be a permutation of the vertices")
    return ordering


def greedy_coloring(G: Graph, ordering=None) -> list:
    """First-fit colouring; ``result[v]`` is the colour of vertex ``v``."""
    order = _ordering(G, ordering)
    colors = [-1] * G.n
    adj = G.adjacency
    for v in order:
        used = {colors[u] for u in np.flatnonzero(adj[v]).tolist() if colors[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def is_proper_coloring(G: Graph, colors) -> bool:
    c = np.asarray(colors)
    i, j = np.nonzero(np.triu(G.adjacency, 1))
    return bool((c[i] != c[j]).all())


@dataclass(frozen=True)
class ListColoringResult:
    success: bool
    colors: dict
    failed_vertex: int | None = None
    failed_position: int | None = None


def greedy_list_coloring(G: Graph, lists, ordering=None) -> ListColoringResult:
    """Colour vertices in order with the least available colour from each list.

    Stops at the first vertex every one of whose list colours is already used
    by an earlier neighbour; that vertex and its position are reported.
    """
    order = _ordering(G, ordering)
    lists = [sorted(set(lst)) for lst in lists]
    if len(lists) != G.n or any(not lst for lst in lists):
        raise ValueError("every vertex needs a nonempty list")
    colors = {}
    adj = G.adjacency
    for pos, v in enumerate(order):
        used = {colors[u] for u in np.flatnonzero(adj[v]).tolist() if u in colors}
        for c in lists[v]:
            if c not in used:
                colors[v] = c
                break
        else:
            return ListColoringResult(False, colors, v, pos)
    return ListColoringResult(True, colors)


def clique_cover_greedy(G: Graph, ordering=None) -> list:
    """Partition into cliques by greedily colouring the complement."""
    colors = greedy_coloring(complement_graph(G), ordering)
    classes = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    return [classes[c] for c in sorted(classes)]


def is_clique(G: Graph, vertices) -> bool:
    vs = list(vertices)
    sub = G.adjacency[np.ix_(vs, vs)]
    return bool(sub[~np.eye(len(vs), dtype=bool)].all())


# -- closed-form bounds -------------------------------------------------------


def _log(x, base):
    return math.log(x) / math.log(base)


@dataclass
class BoundSheet:
    """Every cliques/colouring bound evaluated at ``(n, p)``.

    The ``d_*`` fields are the logarithm bases.  ``clique_cover_upper`` and
    ``independence_lower`` use ``log_d log_d n``; the ``*_natural`` variants
    read the outer logarithm as natural.
    """

    n: int
    p: float
    d_clique: float
    d_independence: float
    d_complement: float
    clique_upper: float
    independence_upper: float
    clique_cover_lower: float
    chromatic_lower: float
    u_list: float
    list_chromatic_upper: float
    chromatic_upper: float
    clique_lower: float
    u_cc: float
    u_cc_natural: float
    clique_cover_upper: float
    clique_cover_upper_natural: float
    independence_lower: float
    independence_lower_natural: float
    vacuous: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        return {k: (_json_float(v) if isinstance(v, float) else v) for k, v in d.items()}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _json_float(x):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _reciprocal_bound(n, u):
    return n / u if u > 0 else math.inf


def theory_bounds(n: int, p: float) -> BoundSheet:
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")
    if n < 2:
        raise ValueError("n must be >= 2")
    d_cl = 1 / (2 * p - p * p)
    d_ind = 1 / (1 - p)
    d_c = 1 / p

    clique_upper = 27 * _log(n, d_cl) ** 2
    independence_upper = 27 * _log(n, d_ind) ** 2

    L_ind = _log(n, d_ind)
    u_list = 0.25 * L_ind - 0.5 * _log(L_ind, d_ind) - 2
    L_c = _log(n, d_c)
    clique_lower = 0.25 * L_c - 0.5 * _log(L_c, d_c) - 2
    u_cc = 0.5 * L_c - _log(L_c, d_c) - 6
    u_cc_nat = 0.5 * L_c - math.log(L_c) - 6
    ind_lower = 0.5 * L_ind - _log(L_ind, d_ind) - 6
    ind_lower_nat = 0.5 * L_ind - math.log(L_ind) - 6

    sheet = BoundSheet(
        n=n,
        p=p,
        d_clique=d_cl,
        d_independence=d_ind,
        d_complement=d_c,
        clique_upper=clique_upper,
        independence_upper=independence_upper,
        clique_cover_lower=n / clique_upper,
        chromatic_lower=n / independence_upper,
        u_list=u_list,
        list_chromatic_upper=_reciprocal_bound(n, u_list),
        chromatic_upper=_reciprocal_bound(n, u_list),
        clique_lower=clique_lower,
        u_cc=u_cc,
        u_cc_natural=u_cc_nat,
        clique_cover_upper=_reciprocal_bound(n, u_cc),
        clique_cover_upper_natural=_reciprocal_bound(n, u_cc_nat),
        independence_lower=ind_lower,
        independence_lower_natural=ind_lower_nat,
    )
    for name in (
        "clique_upper",
        "independence_upper",
        "clique_cover_lower",
        "chromatic_lower",
        "list_chromatic_upper",
        "chromatic_upper",
        "clique_lower",
        "clique_cover_upper",
        "clique_cover_upper_natural",
        "independence_lower",
        "independence_lower_natural",
    ):
        v = getattr(sheet, name)
        sheet.vacuous[name] = bool(not math.isfinite(v) or v <= 0 or v > n)
    return sheet
