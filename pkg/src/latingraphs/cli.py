"""Command line entry point: ``latingraphs gen | analyze | experiment | bounds``.

Exit codes: 0 success, 1 usage or input error, 2 a theorem-backed check failed.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import cliques, connectivity, harness, io, spectral
from ._rng import make_rng
from .exceptions import CapExceededError, ChecksumError, LatinSquareError, ParseError
from .latin import GroupSpec, group_table, square_from_family
from .models import (
    build_graph,
    build_multigraph,
    degree_bounds_hold,
    degree_profile,
    sample_symbols_k,
    sample_symbols_p,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

ANALYZE_PROPS = (
    "degrees",
    "connected",
    "spectrum",
    "omega",
    "alpha",
    "chi_greedy",
    "theta_greedy",
    "connectivity",
    "hamiltonian",
    "distances",
    "expansion",
)


def parse_group(text, table_mode="division"):
    """``cyclic:5``, ``ea:2:3``, ``dihedral:4``; join factors with ``*`` for a direct product."""
    factors = []
    for part in text.split("*"):
        bits = part.strip().split(":")
        kind = bits[0]
        try:
            args = [int(b) for b in bits[1:]]
        except ValueError:
            raise click.BadParameter(f"bad group factor {part!r}") from None
        if kind == "cyclic" and len(args) == 1:
            factors.append(GroupSpec.cyclic(args[0], table_mode))
        elif kind in ("ea", "elementary_abelian") and len(args) == 2:
            factors.append(GroupSpec.elementary_abelian(args[0], args[1], table_mode))
        elif kind == "dihedral" and len(args) == 1:
            factors.append(GroupSpec.dihedral(args[0], table_mode))
        else:
            raise click.BadParameter(f"bad group factor {part!r}")
    if len(factors) == 1:
        return factors[0]
    return GroupSpec.direct_product(factors, table_mode)


def _int_list(text):
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    return [int(t) for t in text.replace(",", " ").split()]


@click.group()
def cli():
    """Random Latin square graphs: generation, analysis and experiments."""


@cli.command()
@click.option("--family", default="cyclic",
              type=click.Choice(["cyclic", "elementary_abelian", "dihedral", "paired_example", "random", "group"]))
@click.option("--n", type=int, help="order of the square")
@click.option("--r", type=int, help="half-order for paired_example")
@click.option("--group", "group_text", help="group spec, e.g. 'ea:2:3' or 'cyclic:3*dihedral:4'")
@click.option("--base", type=int, default=2, show_default=True, help="base for elementary_abelian")
@click.option("--table-mode", default="division", type=click.Choice(["division", "multiplication"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="output file (default stdout)")
def gen(family, n, r, group_text, base, table_mode, seed, out):
    """Emit a Latin square in the text format."""
    if family == "group":
        if not group_text:
            raise click.UsageError("--family group needs --group")
        L = group_table(parse_group(group_text, table_mode))
    elif family == "paired_example":
        if r is None and n is None:
            raise click.UsageError("paired_example needs --r or --n")
        L = square_from_family(family, n, **({"r": r} if r is not None else {}))
    else:
        if n is None:
            raise click.UsageError(f"--family {family} needs --n")
        params = {"table_mode": table_mode}
        if family == "elementary_abelian":
            params["base"] = base
        if family == "random":
            params = {"seed": seed}
        L = square_from_family(family, n, **params)
    text = io.format_square(L)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    return EXIT_OK


@cli.command()
@click.option("--square", "square_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--subset", help="explicit symbol subset, e.g. '1,4,5'")
@click.option("--multiset", help="explicit symbol multiset, e.g. '1,1,4'")
@click.option("--p", type=float, help="sample a subset with probability p")
@click.option("--k", type=int, help="sample a multiset of k symbols")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--props", default="degrees,connected", show_default=True,
              help=f"comma list from: {', '.join(ANALYZE_PROPS)}")
@click.option("--eps", type=float, default=0.5, show_default=True, help="expansion / tail-bound epsilon")
@click.option("--json", "as_json", is_flag=True, help="print JSON")
def analyze(square_path, subset, multiset, p, k, seed, props, eps, as_json):
    """Build one graph from a square and report properties."""
    L = io.load_square(square_path)
    chosen = [x for x in (subset, multiset, p, k) if x is not None]
    if len(chosen) != 1:
        raise click.UsageError("give exactly one of --subset, --multiset, --p, --k")
    multigraph = None
    if subset is not None:
        symbols = sorted(set(_int_list(subset)))
    elif p is not None:
        symbols = list(sample_symbols_p(L.order, p, seed).symbols)
    else:
        symbols = _int_list(multiset) if multiset is not None else list(sample_symbols_k(L.order, k, seed).symbols)
        multigraph = build_multigraph(L, symbols)
    G = build_graph(L, symbols)
    wanted = [s.strip() for s in props.split(",") if s.strip()]
    bad = [w for w in wanted if w not in ANALYZE_PROPS]
    if bad:
        raise click.UsageError(f"unknown property {bad[0]!r}")

    out = {"n": L.order, "symbols": symbols}
    violations = []
    for prop in wanted:
        if prop == "degrees":
            prof = degree_profile(G)
            s = len(set(symbols))
            ok = degree_bounds_hold(G, s)
            out["degrees"] = {"min": prof.min_degree, "max": prof.max_degree, "bounds_hold": ok}
            if not ok:
                violations.append("degree bounds")
        elif prop == "connected":
            out["connected"] = connectivity.is_connected(G)
        elif prop == "spectrum":
            if multigraph is None:
                multigraph = build_multigraph(L, symbols)
                note = "subset treated as a multiset with one copy of each symbol"
            else:
                note = "multigraph model"
            if multigraph.k < 1:
                raise click.UsageError("spectrum needs a nonempty symbol set")
            rep = spectral.spectrum(multigraph)
            d = rep.to_dict()
            d["note"] = note
            if 0 < eps < 1:
                tb = spectral.tail_bound(L.order, multigraph.k, eps)
                d["tail_bound"] = {"eps": eps, "exact": tb.exact_bound, "weak": tb.weak_bound}
            out["spectrum"] = d
            if spectral.gap_certifies_connected(rep.mu) and not connectivity.is_connected(multigraph):
                violations.append("mu < 1 but disconnected")
            if rep.residuals["mu_agreement"] > 1e-8:
                violations.append("mu disagrees with ||T - J/n||")
        elif prop == "omega":
            out["omega"] = cliques.clique_number_exact(G)
        elif prop == "alpha":
            out["alpha"] = cliques.independence_number_exact(G)
        elif prop == "chi_greedy":
            out["chi_greedy"] = max(cliques.greedy_coloring(G), default=-1) + 1
        elif prop == "theta_greedy":
            out["theta_greedy"] = len(cliques.clique_cover_greedy(G))
        elif prop == "connectivity":
            rep = connectivity.connectivity_report(G)
            out["connectivity"] = rep.to_dict()
            if not rep.whitney_chain_holds:
                violations.append("kappa <= lambda <= delta")
        elif prop == "hamiltonian":
            cycle = connectivity.hamiltonian_cycle_exact(G)
            out["hamiltonian"] = {"cycle": cycle, "hamiltonian": cycle is not None}
        elif prop == "distances":
            out["distances"] = connectivity.distance_metrics(G).to_dict()
        elif prop == "expansion":
            v = spectral.expansion_check(G, eps, seed)
            out["expansion"] = {
                "eps": eps,
                "is_expander": v.is_expander,
                "witness": list(v.witness),
                "worst_ratio": v.worst_ratio,
                "mode": v.mode,
            }
    out["violations"] = violations
    payload = io._jsonable(out)
    if as_json:
        click.echo(json.dumps(payload, indent=2))
    else:
        for key, val in payload.items():
            click.echo(f"{key}: {val}")
    return EXIT_VIOLATION if violations else EXIT_OK


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
def experiment(config_path, out_dir, threads):
    """Run a Monte Carlo experiment; writes report.json and records.csv."""
    try:
        raw = json.loads(Path(config_path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc.msg}", line=exc.lineno) from exc
    cfg = harness.ExperimentConfig.from_dict(raw)
    report = harness.run_experiment(cfg, threads=threads)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    io.dump_report(report.to_dict(), out / "report.json")
    io.records_to_csv(report.records, out / "records.csv")
    for agg in report.aggregates:
        summary = {k: v for k, v in agg.items()}
        click.echo(json.dumps(io._jsonable(summary)))
    for v in report.violations:
        click.echo(f"VIOLATION: {v}", err=True)
    return EXIT_OK if report.ok else EXIT_VIOLATION


@cli.command()
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, required=True)
def bounds(n, p):
    """Print every clique/colouring bound at (n, p) as JSON."""
    click.echo(cliques.theory_bounds(n, p).to_json(indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="latingraphs", standalone_mode=False)
    except click.exceptions.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except (ParseError, ChecksumError, LatinSquareError, CapExceededError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
