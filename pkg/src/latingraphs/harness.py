"""Declarative Monte Carlo experiments over random Latin square graphs.

A config names a square family, a random model, a grid of orders, one
property and a trial count.  Trial ``t`` draws everything from the seed
``mix(master_seed, t)``, so reports are identical whatever the thread count.
Timing (``micros``) is the only field that varies between reruns.
"""
from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import cliques, connectivity, spectral
from ._rng import make_rng, mix
from .latin import LatinSquare, square_from_family
from .models import (
    build_graph,
    build_multigraph,
    complement_graph,
    degree_bounds_hold,
    sample_symbols_k,
    sample_symbols_p,
)

MODELS = ("subset_p", "multiset_k", "multigraph_k", "complement_p")

# property name -> (takes argument, kind of value)
PROPERTIES = {
    "connected": (False, "bool"),
    "mu_geq": (True, "bool"),
    "mu": (False, "float"),
    "omega": (False, "int"),
    "alpha": (False, "int"),
    "chi_greedy": (False, "int"),
    "theta_greedy": (False, "int"),
    "kappa": (False, "int"),
    "lambda": (False, "int"),
    "hamiltonian": (False, "bool"),
    "girth": (False, "float"),
    "diameter": (False, "float"),
    "triangle_at_0": (False, "bool"),
    "has_triangle": (False, "bool"),
    "degree_bounds": (False, "bool"),
    "edge_discrepancy_holds": (False, "bool"),
    "pattern_identity": (False, "bool"),
}

# properties that a theorem (or an exact identity) says must hold every time
INVARIANT_PROPERTIES = ("degree_bounds", "edge_discrepancy_holds", "pattern_identity")

NEEDS_MULTIGRAPH = ("mu_geq", "mu", "edge_discrepancy_holds")
CAPS = {
    "omega": cliques.CLIQUE_EXACT_CAP,
    "alpha": cliques.CLIQUE_EXACT_CAP,
    "kappa": connectivity.CONNECTIVITY_CAP,
    "lambda": connectivity.CONNECTIVITY_CAP,
    "hamiltonian": connectivity.HAMILTON_CAP,
}

DISCREPANCY_PAIRS = 100
PATTERN_MAX_SUBSET = 16
Z95 = 1.959963984540054


class ConfigError(ValueError):
    pass


_PROP_RE = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def parse_property(text):
    """``"mu_geq(0.5)"`` -> ``("mu_geq", 0.5)``; ``"connected"`` -> ``("connected", None)``."""
    m = _PROP_RE.match(text)
    if not m:
        raise ConfigError(f"property: cannot parse {text!r}")
    name, arg = m.group(1), m.group(2)
    if name not in PROPERTIES:
        raise ConfigError(f"property: unknown property {name!r}")
    takes_arg = PROPERTIES[name][0]
    if takes_arg:
        if arg is None:
            raise ConfigError(f"property: {name} needs an argument, e.g. {name}(0.5)")
        try:
            value = float(arg)
        except ValueError:
            raise ConfigError(f"property: bad argument {arg!r}") from None
        if name == "mu_geq" and not 0 < value < 1:
            raise ConfigError("property: mu_geq threshold must lie in (0, 1)")
        return name, value
    if arg:
        raise ConfigError(f"property: {name} takes no argument")
    return name, None


@dataclass
class ExperimentConfig:
    """One experiment.  The JSON config file mirrors these fields.

    ``model`` is a dict with ``kind`` in :data:`MODELS` and either ``p`` (with
    optional ``p_exponent``, giving ``p * n**p_exponent``) or ``k`` (or
    ``k_log2``, giving ``round(k_log2 * log2 n)``).
    """

    latin_family: str
    model: dict
    n_grid: list
    property: str
    trials: int = 100
    master_seed: int = 0
    family_params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d):
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown config field")
        missing = {"latin_family", "model", "n_grid", "property"} - set(d)
        if missing:
            raise ConfigError(f"{sorted(missing)[0]}: required config field missing")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def to_dict(self):
        return asdict(self)

    def parsed_property(self):
        return parse_property(self.property)

    def model_param(self, n):
        kind = self.model.get("kind")
        if kind in ("subset_p", "complement_p"):
            if "p" not in self.model:
                raise ConfigError("model.p: required for p-models")
            p = float(self.model["p"]) * n ** float(self.model.get("p_exponent", 0.0))
            if not 0 <= p <= 1:
                raise ConfigError(f"model.p: resolves to {p} at n={n}, outside [0, 1]")
            return p
        if "k" in self.model:
            k = int(self.model["k"])
        elif "k_log2" in self.model:
            k = int(round(float(self.model["k_log2"]) * math.log2(n)))
        else:
            raise ConfigError("model.k: required for k-models")
        if k < 0:
            raise ConfigError("model.k: must be >= 0")
        return k

    def validate(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials: must be an integer >= 1")
        if not isinstance(self.model, dict) or self.model.get("kind") not in MODELS:
            raise ConfigError(f"model.kind: must be one of {MODELS}")
        if not self.n_grid:
            raise ConfigError("n_grid: must be nonempty")
        name, arg = self.parsed_property()
        kind = self.model["kind"]
        if name in NEEDS_MULTIGRAPH and kind not in ("multiset_k", "multigraph_k"):
            raise ConfigError(f"property: {name} needs a k-model (multiset_k or multigraph_k), got {kind}")
        if name == "degree_bounds" and kind == "complement_p":
            raise ConfigError("property: degree_bounds does not apply to the complement model")
        for n in self.n_grid:
            if not isinstance(n, int) or n < 1:
                raise ConfigError(f"n_grid: bad order {n!r}")
            if name in CAPS and n > CAPS[name]:
                raise ConfigError(f"n_grid: {name} is capped at n={CAPS[name]}, got {n}")
            if name == "hamiltonian" and n < 3:
                raise ConfigError("n_grid: hamiltonian needs n >= 3")
            param = self.model_param(n)
            if name in NEEDS_MULTIGRAPH and param < 1:
                raise ConfigError(f"model.k: {name} needs k >= 1 (empty multiset has no spectrum)")


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n: int
    param: float
    prop: str
    value: object
    sample_size: int
    symbols: tuple
    micros: int

    def key(self):
        """Everything except timing: equal keys mean a bit-for-bit reproduction."""
        d = asdict(self)
        d.pop("micros")
        return d


def estimate_probability(samples, z=Z95):
    """Point estimate and Wilson score interval for a list of booleans."""
    samples = list(samples)
    m = len(samples)
    if m == 0:
        raise ValueError("need at least one sample")
    phat = sum(bool(s) for s in samples) / m
    z2 = z * z
    denom = 1 + z2 / m
    center = (phat + z2 / (2 * m)) / denom
    half = z * math.sqrt(phat * (1 - phat) / m + z2 / (4 * m * m)) / denom
    return phat, max(0.0, center - half), min(1.0, center + half)


def _family_square(cfg: ExperimentConfig, n: int) -> LatinSquare:
    return square_from_family(cfg.latin_family, n, **cfg.family_params)


def evaluate_property(name, arg, L, graph, multigraph, sample, extra_seed):
    """Compute one property for one sampled graph."""
    if name == "connected":
        return connectivity.is_connected(graph)
    if name == "mu_geq":
        return spectral.spectrum(multigraph).mu >= arg
    if name == "mu":
        return spectral.spectrum(multigraph).mu
    if name == "omega":
        return cliques.clique_number_exact(graph)
    if name == "alpha":
        return cliques.independence_number_exact(graph)
    if name == "chi_greedy":
        return max(cliques.greedy_coloring(graph), default=-1) + 1
    if name == "theta_greedy":
        return len(cliques.clique_cover_greedy(graph))
    if name == "kappa":
        return connectivity.vertex_connectivity(graph)
    if name == "lambda":
        return connectivity.edge_connectivity(graph)
    if name == "hamiltonian":
        return connectivity.is_hamiltonian(graph)
    if name == "girth":
        return connectivity.distance_metrics(graph).girth
    if name == "diameter":
        return connectivity.distance_metrics(graph).diameter
    if name == "triangle_at_0":
        return connectivity.vertex_in_triangle(graph, 0)
    if name == "has_triangle":
        return connectivity.has_triangle(graph)
    if name == "degree_bounds":
        return degree_bounds_hold(graph, len(sample.support))
    if name == "edge_discrepancy_holds":
        rng = make_rng(extra_seed)
        mu = spectral.spectrum(multigraph).mu
        n = multigraph.n
        for _ in range(DISCREPANCY_PAIRS):
            A = np.flatnonzero(rng.random(n) < rng.random())
            B = np.flatnonzero(rng.random(n) < rng.random())
            if not spectral.edge_discrepancy(multigraph, A, B, mu).holds:
                return False
        return True
    if name == "pattern_identity":
        rng = make_rng(extra_seed)
        size = int(rng.integers(1, min(L.order, PATTERN_MAX_SUBSET) + 1))
        A = rng.choice(L.order, size=size, replace=False)
        return cliques.pattern_counts(L, A).identity_holds
    raise ConfigError(f"property: unknown property {name!r}")


def run_trial(cfg: ExperimentConfig, L: LatinSquare, n: int, trial: int) -> TrialRecord:
    name, arg = cfg.parsed_property()
    seed = mix(cfg.master_seed, trial)
    kind = cfg.model["kind"]
    param = cfg.model_param(n)
    start = time.perf_counter()
    multigraph = None
    if kind in ("subset_p", "complement_p"):
        sample = sample_symbols_p(L.order, param, seed)
        graph = build_graph(L, sample)
        if kind == "complement_p":
            graph = complement_graph(graph)
    else:
        sample = sample_symbols_k(L.order, param, seed)
        graph = build_graph(L, sample.support)
        multigraph = build_multigraph(L, sample)
    value = evaluate_property(name, arg, L, graph, multigraph, sample, mix(seed, 1))
    if isinstance(value, np.generic):
        value = value.item()
    micros = int((time.perf_counter() - start) * 1e6)
    return TrialRecord(trial, seed, L.order, param, cfg.property, value, len(sample), sample.symbols, micros)


def _aggregate(cfg, n, L, records):
    name, arg = cfg.parsed_property()
    values = [r.value for r in records]
    agg = {"n": n, "order": L.order, "param": records[0].param, "trials": len(records)}
    if PROPERTIES[name][1] == "bool":
        point, lo, hi = estimate_probability(values)
        agg.update(successes=sum(bool(v) for v in values), frequency=point, wilson_low=lo, wilson_high=hi)
    else:
        finite = [float(v) for v in values if not (isinstance(v, float) and math.isinf(v))]
        agg.update(
            mean=float(np.mean(finite)) if finite else math.nan,
            min=min(finite) if finite else math.inf,
            max=max(finite) if finite else math.inf,
            infinite=len(values) - len(finite),
        )
    check = None
    if name == "mu_geq":
        k = int(agg["param"])
        tb = spectral.tail_bound(L.order, k, arg)
        sigma = math.sqrt(tb.exact_bound * (1 - tb.exact_bound) / len(records))
        allowance = tb.exact_bound + 3 * sigma
        agg.update(tail_bound=tb.exact_bound, weak_bound=tb.weak_bound, sigma=sigma, allowance=allowance)
        check = agg["frequency"] <= allowance
    elif name in INVARIANT_PROPERTIES:
        check = agg["successes"] == len(records)
    if isinstance(agg["param"], int) and agg["param"] > L.order and cfg.model["kind"] != "subset_p":
        agg["k_exceeds_n"] = True
    agg["check_passed"] = check
    return agg


@dataclass
class ExperimentReport:
    config: dict
    records: list
    aggregates: list
    violations: list

    def to_dict(self):
        return {
            "config": self.config,
            "records": [asdict(r) for r in self.records],
            "aggregates": self.aggregates,
            "violations": self.violations,
        }

    @property
    def ok(self):
        return not self.violations


def run_experiment(cfg, threads: int = 1) -> ExperimentReport:
    """Run every trial for every order in the grid and aggregate per order."""
    if isinstance(cfg, dict):
        cfg = ExperimentConfig.from_dict(cfg)
    else:
        cfg.validate()
    records = []
    aggregates = []
    violations = []
    for n in cfg.n_grid:
        L = _family_square(cfg, n)
        tasks = range(cfg.trials)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                recs = list(pool.map(lambda t: run_trial(cfg, L, n, t), tasks))
        else:
            recs = [run_trial(cfg, L, n, t) for t in tasks]
        agg = _aggregate(cfg, n, L, recs)
        if agg["check_passed"] is False:
            violations.append(f"{cfg.property} at n={n}: theorem-backed check failed")
        records.extend(recs)
        aggregates.append(agg)
    return ExperimentReport(cfg.to_dict(), records, aggregates, violations)
