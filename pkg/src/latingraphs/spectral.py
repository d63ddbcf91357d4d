"""Spectrum of the normalised adjacency matrix and the bounds built on it."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import make_rng
from .models import Graph, MultiGraph

EXHAUSTIVE_EXPANSION_CAP = 24
EXPANSION_SAMPLES = 10 ** 4
# eigenvalue 1 with multiplicity > 1 comes back as 1 - O(1e-16)
MU_ONE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """Eigenvalues of ``T = A / degree`` sorted descending, and ``mu`` two ways.

    ``mu`` comes from the eigenvalues; ``mu_via_norm`` is the spectral norm of
    ``T - J/n`` computed independently by SVD.
    """

    eigenvalues: np.ndarray
    mu: float
    mu_via_norm: float
    degree: int
    residuals: dict = field(default_factory=dict)
    note: str = ""

    @property
    def n(self):
        return len(self.eigenvalues)

    def to_dict(self):
        ev = self.eigenvalues
        if len(ev) <= 128:
            eig = {"full": ev.tolist()}
        else:
            eig = {
                "top": ev[:5].tolist(),
                "bottom": ev[-5:].tolist(),
                "mean": float(ev.mean()),
                "std": float(ev.std()),
            }
        return {
            "n": self.n,
            "degree": self.degree,
            "eigenvalues": eig,
            "mu": self.mu,
            "mu_via_norm": self.mu_via_norm,
            "residuals": dict(self.residuals),
            "note": self.note,
        }


def normalized_adjacency(M: MultiGraph) -> np.ndarray:
    if M.k < 1:
        raise ValueError("normalised adjacency needs k >= 1")
    return M.weights / (2.0 * M.k)


def spectrum(M) -> SpectralReport:
    """Full symmetric eigendecomposition of the normalised adjacency.

    ``M`` is a :class:`MultiGraph` (degree ``2k``) or a regular simple
    :class:`Graph`.  Irregular simple graphs have no normalised adjacency;
    analyse the multigraph model of the same symbol set instead.
    """
    note = ""
    if isinstance(M, Graph):
        if not M.is_regular():
            raise ValueError(
                "irregular simple graph: T is only defined for regular graphs; "
                "use the multigraph model of the same symbols"
            )
        deg = int(M.degrees[0]) if M.n else 0
        if deg == 0:
            raise ValueError("degree 0: normalised adjacency undefined")
        T = M.adjacency.astype(float) / deg
        note = "simple regular graph"
    else:
        T = normalized_adjacency(M)
        deg = 2 * M.k
        note = "multigraph"
    n = T.shape[0]
    ev = np.linalg.eigvalsh(T)[::-1].copy()
    mu = float(max(abs(ev[1]), abs(ev[-1]))) if n > 1 else 0.0
    B = T - np.full((n, n), 1.0 / n)
    mu_norm = float(np.linalg.norm(B, 2))
    ones = np.ones(n)
    residuals = {
        "lambda0": float(abs(ev[0] - 1.0)),
        "lambda_min_below_minus_one": float(max(0.0, -1.0 - ev[-1])),
        "row_sums": float(np.abs(T.sum(axis=1) - 1.0).max()),
        "col_sums": float(np.abs(T.sum(axis=0) - 1.0).max()),
        "ones_eigvec": float(np.abs(T @ ones - ones).max()),
        "mu_agreement": float(abs(mu - mu_norm)),
    }
    return SpectralReport(ev, mu, mu_norm, deg, residuals, note)


def gap_certifies_connected(mu: float, tol: float = MU_ONE_TOL) -> bool:
    """Whether ``mu`` is below 1 by more than rounding, which forces connectivity."""
    return mu < 1.0 - tol


def entropy_H(x: float) -> float:
    """``x ln(2x) + (1-x) ln(2(1-x))`` on ``0 < x < 1``."""
    if not 0 < x < 1:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    return x * math.log(2 * x) + (1 - x) * math.log(2 * (1 - x))


@dataclass(frozen=True)
class TailBound:
    exact_bound: float
    weak_bound: float

    def __iter__(self):
        return iter((self.exact_bound, self.weak_bound))


def tail_bound(n: int, k: int, eps: float) -> TailBound:
    """Upper bounds on ``Pr(mu >= eps)`` for the ``k``-symbol multigraph model.

    ``exact_bound = 2n exp(-k H((1+eps)/2))``, ``weak_bound = 2n exp(-k eps^2/2)``,
    both clamped to 1.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if k < 1:
        raise ValueError("k must be >= 1")
    exact = 2 * n * math.exp(-k * entropy_H((1 + eps) / 2))
    weak = 2 * n * math.exp(-k * eps * eps / 2)
    return TailBound(min(1.0, exact), min(1.0, weak))


@dataclass(frozen=True)
class DiscrepancyResult:
    lhs: float
    rhs: float
    holds: bool


def edge_discrepancy(M: MultiGraph, A, B, mu: float) -> DiscrepancyResult:
    """Check ``|e(A,B) - 2k|A||B|/n| <= 2k mu sqrt(|A||B|)``.

    ``e(A,B)`` sums ``weights[a, b]`` over ordered pairs, so edges inside
    ``A & B`` count twice.
    """
    A = np.asarray(sorted(set(int(v) for v in A)), dtype=np.int64)
    B = np.asarray(sorted(set(int(v) for v in B)), dtype=np.int64)
    if len(A) == 0 or len(B) == 0:
        return DiscrepancyResult(0.0, 0.0, True)
    e = int(M.weights[np.ix_(A, B)].sum())
    two_k = 2 * M.k
    lhs = abs(e - two_k * len(A) * len(B) / M.n)
    rhs = two_k * mu * math.sqrt(len(A) * len(B))
    holds = lhs <= rhs + 1e-9 * max(1.0, rhs)
    return DiscrepancyResult(float(lhs), float(rhs), bool(holds))


@dataclass(frozen=True)
class ExpansionVerdict:
    """Outcome of an expansion test.

    ``witness`` is the set with the smallest ratio ``|N(W) \\ W| / |W|`` seen;
    ``is_expander`` is whether that ratio reaches ``eps``.
    """

    is_expander: bool
    witness: tuple
    worst_ratio: float
    mode: str  # "exhaustive" or "sampled"


def _expansion_exhaustive(G: Graph, eps):
    n = G.n
    half = n // 2
    nb = np.array(G.adjacency_bitsets(), dtype=np.int64)
    lo_bits = min(n, 16)
    hi_bits = n - lo_bits
    lo = np.arange(1 << lo_bits, dtype=np.int64)
    N_lo = np.zeros(1 << lo_bits, dtype=np.int64)
    for b in range(lo_bits):
        sel = (lo >> b) & 1 == 1
        N_lo[sel] |= nb[b]
    pc_lo = np.bitwise_count(lo).astype(np.int64)
    best_ratio, best_mask = math.inf, 0
    for hi in range(1 << hi_bits):
        hi_mask = hi << lo_bits
        N_hi = 0
        for b in range(hi_bits):
            if hi >> b & 1:
                N_hi |= int(nb[lo_bits + b])
        size = pc_lo + bin(hi).count("1")
        ok = (size >= 1) & (size <= half)
        if not ok.any():
            continue
        W = lo | hi_mask
        out = (N_lo | N_hi) & ~W
        ratio = np.where(ok, np.bitwise_count(out) / np.maximum(size, 1), np.inf)
        idx = int(np.argmin(ratio))
        if ratio[idx] < best_ratio:
            best_ratio, best_mask = float(ratio[idx]), int(W[idx])
    return best_ratio, best_mask


def _expansion_sampled(G: Graph, seed):
    n = G.n
    half = n // 2
    rng = make_rng(seed)
    adj = G.adjacency
    best_ratio, best_W = math.inf, ()
    for _ in range(EXPANSION_SAMPLES):
        size = int(rng.integers(1, half + 1))
        W = np.sort(rng.choice(n, size=size, replace=False))
        inW = np.zeros(n, dtype=bool)
        inW[W] = True
        boundary = adj[W].any(axis=0) & ~inW
        ratio = boundary.sum() / size
        if ratio < best_ratio:
            best_ratio, best_W = float(ratio), tuple(W.tolist())
    return best_ratio, best_W


def expansion_check(G, eps: float, seed=0) -> ExpansionVerdict:
    """Test ``|N(W) \\ W| >= eps |W|`` for vertex sets with ``|W| <= n/2``.

    Exhaustive for ``n <= 24``; otherwise 10^4 random sets are tried and the
    verdict is tagged ``"sampled"``.  Multigraphs are simplified first.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if isinstance(G, MultiGraph):
        G = G.simple()
    if G.n < 2:
        return ExpansionVerdict(True, (), math.inf, "exhaustive")
    if G.n <= EXHAUSTIVE_EXPANSION_CAP:
        ratio, mask = _expansion_exhaustive(G, eps)
        witness = tuple(v for v in range(G.n) if mask >> v & 1)
        mode = "exhaustive"
    else:
        ratio, witness = _expansion_sampled(G, seed)
        mode = "sampled"
    return ExpansionVerdict(bool(ratio >= eps), witness, ratio, mode)


def hamiltonicity_threshold(n: int) -> float:
    """``(ln ln n)^2 / (1000 ln n ln ln ln n)``; defined for ``n >= 16``."""
    if n < 16:
        raise ValueError(f"threshold undefined for n={n}: needs ln ln ln n > 0 (n >= 16)")
    ln = math.log(n)
    lln = math.log(ln)
    return lln * lln / (1000 * ln * math.log(lln))

